//! Synthetic networks with known fractality.
//!
//! * `(u, v, g)`-flower: fractal iff `u > 1`.
//! * `(c, e, g)`-SHM: fractal for `e = 0`, small-world for `e = 1`.
//! * `(c, t)`-BA: preferential attachment, never fractal.
//!
//! Flower and SHM graphs are fully deterministic. Vertices are numbered parents
//! before children, generation by generation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::graph::{Graph, Vertex};
use crate::seed;

/// Largest edge count a generator will produce.
pub const MAX_EDGES: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(&'static str),
    #[error("model would have more than {MAX_EDGES} edges")]
    TooLarge,
    #[error("cannot parse model spec `{0}`; expected flower:u,v,g | shm:c,e,g | ba:c,t[,seed]")]
    Parse(alloc::string::String),
}

/// A model family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSpec {
    Flower { u: u32, v: u32, g: u32 },
    Shm { c: u32, e: u32, g: u32 },
    Ba { c: u32, t: u32, seed: u64 },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        match *self {
            ModelSpec::Flower { u, v, g } => {
                if u < 1 || v < u || g < 1 {
                    return Err(GeneratorError::InvalidParams("flower needs 1 <= u <= v and g >= 1"));
                }
            }
            ModelSpec::Shm { c, e, g } => {
                if c < 1 || e > 1 || g < 1 {
                    return Err(GeneratorError::InvalidParams("shm needs c >= 1, e in {0, 1} and g >= 1"));
                }
            }
            ModelSpec::Ba { c, t, .. } => {
                if c < 1 {
                    return Err(GeneratorError::InvalidParams("ba needs c >= 1"));
                }
                if t > 24 || u64::from(c) + 1 > 125 << t {
                    return Err(GeneratorError::InvalidParams("ba needs c + 1 <= 125 * 2^t and t <= 24"));
                }
            }
        }
        let (_, m) = self.predicted_size().ok_or(GeneratorError::TooLarge)?;
        if m > MAX_EDGES {
            return Err(GeneratorError::TooLarge);
        }
        Ok(())
    }

    /// `(n, m)` from the model recurrences, or `None` on overflow.
    pub fn predicted_size(&self) -> Option<(u64, u64)> {
        match *self {
            ModelSpec::Flower { u, v, g } => {
                let w = u64::from(u) + u64::from(v);
                let (mut n, mut m) = (w, w);
                for _ in 1..g {
                    n = n.checked_add(m.checked_mul(w - 2)?)?;
                    m = m.checked_mul(w)?;
                }
                Some((n, m))
            }
            ModelSpec::Shm { c, e, g } => {
                let c = u64::from(c);
                let (mut n, mut m) = (5u64, 4u64);
                for _ in 1..g {
                    n = n.checked_add(m.checked_mul(2 * c)?)?;
                    m = m.checked_mul(2 * c + 1 + u64::from(e))?;
                }
                Some((n, m))
            }
            ModelSpec::Ba { c, t, .. } => {
                let c = u64::from(c);
                let n = 125u64.checked_shl(t)?;
                Some((n, c * (c + 1) / 2 + c * n.checked_sub(c + 1)?))
            }
        }
    }

    pub fn generate(&self) -> Result<Graph, GeneratorError> {
        match *self {
            ModelSpec::Flower { u, v, g } => gen_flower(u, v, g),
            ModelSpec::Shm { c, e, g } => gen_shm(c, e, g),
            ModelSpec::Ba { c, t, seed } => gen_ba(c, t, seed),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSpec::Flower { u, v, g } => write!(f, "flower:{u},{v},{g}"),
            ModelSpec::Shm { c, e, g } => write!(f, "shm:{c},{e},{g}"),
            ModelSpec::Ba { c, t, seed } => write!(f, "ba:{c},{t},{seed}"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = GeneratorError;

    /// Parses `flower:u,v,g`, `shm:c,e,g` or `ba:c,t[,seed]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeneratorError::Parse(s.into());
        let (family, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = args.split(',').map(|a| a.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let small = |x: u64| u32::try_from(x).map_err(|_| bad());
        let spec = match (family.trim(), nums.as_slice()) {
            ("flower", &[u, v, g]) => ModelSpec::Flower { u: small(u)?, v: small(v)?, g: small(g)? },
            ("shm", &[c, e, g]) => ModelSpec::Shm { c: small(c)?, e: small(e)?, g: small(g)? },
            ("ba", &[c, t]) => ModelSpec::Ba { c: small(c)?, t: small(t)?, seed: 0 },
            ("ba", &[c, t, seed]) => ModelSpec::Ba { c: small(c)?, t: small(t)?, seed },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn build(n: usize, edges: Vec<(Vertex, Vertex)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator edges are in range")
}

/// `(u, v, g)`-flower: a `(u+v)`-cycle whose edges are, `g − 1` times, each
/// replaced by two parallel paths of `u` and `v` edges.
pub fn gen_flower(u: u32, v: u32, g: u32) -> Result<Graph, GeneratorError> {
    ModelSpec::Flower { u, v, g }.validate()?;
    let w = u + v;
    let mut n = w;
    let mut edges: Vec<(Vertex, Vertex)> = (0..w).map(|i| (i, (i + 1) % w)).collect();
    for _ in 1..g {
        let mut next = Vec::with_capacity(edges.len() * w as usize);
        for &(a, b) in &edges {
            for len in [u, v] {
                let mut prev = a;
                for _ in 1..len {
                    next.push((prev, n));
                    prev = n;
                    n += 1;
                }
                next.push((prev, b));
            }
        }
        edges = next;
    }
    Ok(build(n as usize, edges))
}

/// `(c, e, g)`-SHM: starting from a 5-vertex star, every generation gives each
/// vertex `c·degree` new leaves, links one fresh child of each endpoint of
/// every old edge, and drops the old edge when `e = 0`.
///
/// Each old edge uses the lowest-numbered child of each endpoint not yet used
/// by an earlier edge, so bridges never share a child.
pub fn gen_shm(c: u32, e: u32, g: u32) -> Result<Graph, GeneratorError> {
    ModelSpec::Shm { c, e, g }.validate()?;
    let mut n: u32 = 5;
    let mut edges: Vec<(Vertex, Vertex)> = (1..5).map(|leaf| (0, leaf)).collect();
    for _ in 1..g {
        let mut degree = vec![0u32; n as usize];
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut first_child = Vec::with_capacity(n as usize);
        let mut next = Vec::with_capacity(edges.len() * (2 * c + 2) as usize);
        for parent in 0..n {
            first_child.push(n + next.len() as u32);
            for _ in 0..c * degree[parent as usize] {
                let child = n + next.len() as u32;
                next.push((parent, child));
            }
        }
        let children = next.len() as u32;
        let mut used = vec![0u32; n as usize];
        for &(a, b) in &edges {
            let ca = first_child[a as usize] + used[a as usize];
            let cb = first_child[b as usize] + used[b as usize];
            used[a as usize] += 1;
            used[b as usize] += 1;
            next.push((ca, cb));
            if e == 1 {
                next.push((a, b));
            }
        }
        n += children;
        edges = next;
    }
    Ok(build(n as usize, edges))
}

/// `(c, t)`-BA: preferential attachment from `K_{c+1}` up to `125·2^t`
/// vertices, each newcomer linking to `c` distinct vertices drawn proportionally
/// to degree.
pub fn gen_ba(c: u32, t: u32, seed: u64) -> Result<Graph, GeneratorError> {
    ModelSpec::Ba { c, t, seed }.validate()?;
    let n = 125u32 << t;
    let mut rng = seed::rng(seed);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut endpoints: Vec<Vertex> = Vec::new();
    for a in 0..=c {
        for b in a + 1..=c {
            edges.push((a, b));
            endpoints.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(c as usize);
    for new in c + 1..n {
        targets.clear();
        while targets.len() < c as usize {
            let pick = if endpoints.is_empty() { 0 } else { endpoints[rng.gen_range(0..endpoints.len())] };
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &old in &targets {
            edges.push((old, new));
            endpoints.extend([old, new]);
        }
    }
    Ok(build(n as usize, edges))
}
