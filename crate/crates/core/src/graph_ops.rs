//! Translation, stability, stable extensions and star shapes.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bigraph::{Bigraph, BigraphPair, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphOpsError {
    #[error("translation length must be even and non-negative, got {0}")]
    OddTranslation(i64),
}

/// Arm lengths of a star-shaped tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StarProfile {
    /// Arm lengths in edges, sorted ascending.
    pub arms: Vec<usize>,
    /// Length of the arm that ends at ★; zero when ★ is the center.
    pub star_arm: usize,
    /// Whether ★ ends an arm of maximal length.
    pub star_on_longest: bool,
}

impl StarProfile {
    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    /// ★-arm first, remaining arms in descending order, e.g. `S(4,6,2,1)`.
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn is_four_star(&self) -> bool {
        self.arms.len() == 4
    }
}

impl fmt::Display for StarProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rest = self.arms.clone();
        if let Some(k) = rest.iter().position(|&a| a == self.star_arm) {
            rest.remove(k);
        }
        rest.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<String> = std::iter::once(self.star_arm)
            .chain(rest)
            .map(|a| a.to_string())
            .collect();
        write!(f, "S({})", parts.join(","))
    }
}

/// Shape data of a 2ⁿ spoke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpokeParams {
    /// Number of length-2 arms, counting the ★-arm.
    pub n: usize,
    /// `n + 1`.
    pub q: usize,
}

/// Profile of `g` when it is a simply-laced tree with exactly one vertex of
/// valence at least 3.
pub fn star_profile(g: &Bigraph) -> Option<StarProfile> {
    if !g.is_simply_laced() || g.edge_count() + 1 != g.vertex_count() {
        return None;
    }
    let mut centers = g.vertices().filter(|&v| g.valence(v) >= 3);
    let center = centers.next()?;
    if centers.next().is_some() {
        return None;
    }
    let mut arms = Vec::new();
    let mut star_arm = 0;
    for (first, _) in g.neighbors(center) {
        let (mut prev, mut cur, mut len) = (center, first, 1);
        let mut hits_star = cur == Vertex::STAR;
        loop {
            let next: Vec<Vertex> = g
                .neighbors(cur)
                .into_iter()
                .map(|(w, _)| w)
                .filter(|&w| w != prev)
                .collect();
            match next.as_slice() {
                [] => break,
                [w] => {
                    prev = cur;
                    cur = *w;
                    len += 1;
                    hits_star |= cur == Vertex::STAR;
                }
                _ => unreachable!("only the center branches"),
            }
        }
        if hits_star {
            star_arm = len;
        }
        arms.push(len);
    }
    arms.sort_unstable();
    let star_on_longest = star_arm == *arms.last().unwrap();
    Some(StarProfile {
        arms,
        star_arm,
        star_on_longest,
    })
}

/// Spoke parameters when `g` is a star whose arms all have length 2.
pub fn spoke_params(g: &Bigraph) -> Option<SpokeParams> {
    let s = star_profile(g)?;
    if s.arms.iter().all(|&a| a == 2) && s.arms.len() >= 2 {
        Some(SpokeParams {
            n: s.arms.len(),
            q: s.arms.len() + 1,
        })
    } else {
        None
    }
}

fn translate_graph(g: &Bigraph, k: usize) -> Bigraph {
    let (rows, duals) = g.clone().into_parts();
    let new_rows = (0..k).map(|_| vec![vec![1u8]]).chain(rows).collect();
    let new_duals = (0..k / 2).map(|_| vec![0usize]).chain(duals).collect();
    Bigraph::from_parts_unchecked(new_rows, new_duals)
}

/// Prepends `k` path edges to both graphs.
pub fn translate(p: &BigraphPair, k: i64) -> Result<BigraphPair, GraphOpsError> {
    if k < 0 || k % 2 != 0 {
        return Err(GraphOpsError::OddTranslation(k));
    }
    let k = k as usize;
    Ok(
        BigraphPair::new(translate_graph(p.plus(), k), translate_graph(p.minus(), k))
            .expect("translation preserves pair validity"),
    )
}

/// Every vertex at depth `n` meets at most one vertex at depth `n + 1`, by at
/// most one edge, and every vertex at depth `n + 1` meets exactly one vertex at
/// depth `n`.
pub fn stable_at_depth(g: &Bigraph, n: usize) -> bool {
    if n >= g.max_depth() {
        return true;
    }
    let down = g.layer(n).all(|v| {
        let c = g.children(v);
        c.len() <= 1 && c.iter().all(|&(_, m)| m == 1)
    });
    let up = g.layer(n + 1).all(|v| g.parents(v).len() == 1);
    down && up
}

fn extend_graph(g: &Bigraph, chains: &[usize]) -> Bigraph {
    let (mut rows, mut duals) = g.clone().into_parts();
    let base = g.max_depth();
    let extra = chains.iter().copied().max().unwrap_or(0);
    // position of each growing chain in the previous layer
    let mut prev: Vec<(usize, usize)> = (0..chains.len()).map(|c| (c, c)).collect();
    for j in 1..=extra {
        let alive: Vec<(usize, usize)> = prev.iter().copied().filter(|&(c, _)| chains[c] >= j).collect();
        let width = if j == 1 { g.layer_size(base) } else { prev.len() };
        let layer: Vec<Vec<u8>> = alive
            .iter()
            .map(|&(_, slot)| {
                let mut row = vec![0u8; width];
                row[slot] = 1;
                row
            })
            .collect();
        rows.push(layer);
        if (base + j) % 2 == 0 {
            duals.push((0..alive.len()).collect());
        }
        prev = alive.iter().enumerate().map(|(k, &(c, _))| (c, k)).collect();
    }
    Bigraph::from_parts_unchecked(rows, duals)
}

/// All stable extensions by at most `extra_depths` new depths, including the
/// trivial one.
///
/// Each vertex at the deepest layer sprouts a pendant chain of some length in
/// `0..=extra_depths`, and both graphs receive the same chain lengths, which
/// keeps the new odd layers identified. This requires equal maximum depths and
/// equal deepest-layer sizes; otherwise only the trivial extension exists.
pub fn stable_extensions(p: &BigraphPair, extra_depths: usize) -> Vec<BigraphPair> {
    let mut out = vec![p.clone()];
    let (gp, gm) = (p.plus(), p.minus());
    let d = gp.max_depth();
    if extra_depths == 0 || gm.max_depth() != d || gp.layer_size(d) != gm.layer_size(d) {
        return out;
    }
    let width = gp.layer_size(d);
    let mut chains = vec![0usize; width];
    loop {
        // odometer over {0..=extra}^width
        let mut k = 0;
        while k < width && chains[k] == extra_depths {
            chains[k] = 0;
            k += 1;
        }
        if k == width {
            break;
        }
        chains[k] += 1;
        let q = BigraphPair::new(extend_graph(gp, &chains), extend_graph(gm, &chains))
            .expect("lockstep extension keeps odd layers identified");
        out.push(q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::random_relabeling;
    use proptest::prelude::*;
    use rand::SeedableRng;

    const G4621: &str = "bwd1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1v1duals1v1v1v1x2v1v1";
    const G5521: &str = "bwd1v1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1duals1v1v1v1x2x3v1v1";
    const Z4: &str = "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v2x1x3";
    const Z5: &str = "bwd1v1p1p1p1duals1v4x3x2x1";
    const S_PLUS: &str = "bwd1v1v1v1p1v1x0p0x1v1x1p0x1v0x1v1duals1v1v1x2v1x2v1";

    fn g(s: &str) -> Bigraph {
        s.parse().unwrap()
    }

    fn sym(s: &str) -> BigraphPair {
        BigraphPair::symmetric(g(s))
    }

    #[test]
    fn star_profiles() {
        let p = star_profile(&g(G5521)).unwrap();
        assert_eq!(p.label(), "S(5,5,2,1)");
        assert!(p.star_on_longest);
        assert_eq!(star_profile(&g(G4621)).unwrap().label(), "S(4,6,2,1)");
        assert!(!star_profile(&g(G4621)).unwrap().star_on_longest);
        assert_eq!(star_profile(&g(Z4)).unwrap().arms, vec![2, 2, 2, 2]);
        assert!(star_profile(&g(S_PLUS)).is_none());
        assert!(star_profile(&Bigraph::path(5)).is_none());
    }

    #[test]
    fn spokes() {
        assert_eq!(spoke_params(&g(Z4)), Some(SpokeParams { n: 4, q: 5 }));
        assert_eq!(spoke_params(&g(Z5)), None);
    }

    #[test]
    fn translation() {
        let p = sym(Z5);
        assert_eq!(translate(&p, 0).unwrap(), p);
        let t = translate(&p, 2).unwrap();
        assert_eq!(crate::spectral::supertransitivity(t.plus()), 3);
        assert_eq!(t.plus().vertex_count(), p.plus().vertex_count() + 2);
        assert_eq!(translate(&p, 3), Err(GraphOpsError::OddTranslation(3)));
        assert_eq!(translate(&p, -2), Err(GraphOpsError::OddTranslation(-2)));
        let t = translate(&sym(G4621), 2).unwrap();
        assert_eq!(star_profile(t.plus()).unwrap().label(), "S(6,6,2,1)");
    }

    #[test]
    fn stability() {
        assert!(!stable_at_depth(&g(G4621), 4));
        assert!(stable_at_depth(&g(G4621), 5));
        let path = Bigraph::path(6);
        assert!((0..6).all(|n| stable_at_depth(&path, n)));
    }

    #[test]
    fn extensions_of_cylinder_seed() {
        let p = sym(G4621);
        assert_eq!(stable_extensions(&p, 0), vec![p.clone()]);
        let ext = stable_extensions(&p, 1);
        assert_eq!(ext.len(), 2);
        assert_eq!(ext[0], p);
        assert_eq!(star_profile(ext[1].plus()).unwrap().label(), "S(4,7,2,1)");
        ext[1].validate().unwrap();
    }

    #[test]
    fn extensions_of_a_wide_layer() {
        let p = sym(Z5);
        let ext = stable_extensions(&p, 2);
        assert_eq!(ext.len(), 81);
        for q in &ext {
            q.validate().unwrap();
            for n in p.max_depth()..q.max_depth() {
                assert!(stable_at_depth(q.plus(), n));
                assert!(stable_at_depth(q.minus(), n));
            }
        }
    }

    proptest! {
        #[test]
        fn translate_composes(k1 in 0i64..4, k2 in 0i64..4, which in 0usize..3) {
            let p = sym([G4621, Z4, Z5][which]);
            let (k1, k2) = (2 * k1, 2 * k2);
            let lhs = translate(&translate(&p, k1).unwrap(), k2).unwrap();
            prop_assert_eq!(lhs, translate(&p, k1 + k2).unwrap());
        }

        #[test]
        fn translate_raises_supertransitivity(k in 0i64..5) {
            let p = sym(G4621);
            let t = translate(&p, 2 * k).unwrap();
            prop_assert_eq!(
                crate::spectral::supertransitivity(t.plus()),
                crate::spectral::supertransitivity(p.plus()) + 2 * k as usize
            );
        }

        #[test]
        fn extensions_are_stable(extra in 0usize..5, shift in 0i64..3) {
            let p = translate(&sym(G4621), 2 * shift).unwrap();
            let ext = stable_extensions(&p, extra);
            prop_assert_eq!(ext.len(), extra + 1);
            for q in ext {
                for n in p.max_depth()..q.max_depth() {
                    prop_assert!(stable_at_depth(q.plus(), n));
                }
                let s = star_profile(q.plus()).unwrap();
                prop_assert!(s.is_four_star());
            }
        }

        #[test]
        fn star_profile_survives_relabeling(seed in any::<u64>(), which in 0usize..3) {
            let p = sym([G4621, G5521, Z4][which]);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random_relabeling(&p, &mut rng).apply(&p);
            prop_assert_eq!(star_profile(q.plus()), star_profile(p.plus()));
        }
    }
}
