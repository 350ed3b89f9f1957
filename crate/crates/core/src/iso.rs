//! Pair isomorphisms by per-depth backtracking.

use serde::Serialize;

use crate::bigraph::{Bigraph, BigraphPair};

/// Vertex relabeling taking one pair onto another.
///
/// `plus[d][i]` is the image of vertex `i` at depth `d` of the source plus
/// graph, likewise for `minus`. Odd layers carry the same permutation on both
/// sides. When `swapped` is set the target is the opposite of the second pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairIso {
    pub plus: Vec<Vec<usize>>,
    pub minus: Vec<Vec<usize>>,
    pub swapped: bool,
}

impl PairIso {
    pub fn identity(p: &BigraphPair) -> Self {
        let ident = |g: &Bigraph| g.layer_sizes().iter().map(|&n| (0..n).collect()).collect();
        PairIso {
            plus: ident(p.plus()),
            minus: ident(p.minus()),
            swapped: false,
        }
    }

    /// The inverse map, from `q` (or its opposite) back to `p`.
    pub fn inverse(&self) -> PairIso {
        let inv = |perms: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            perms
                .iter()
                .map(|perm| {
                    let mut out = vec![0; perm.len()];
                    for (i, &j) in perm.iter().enumerate() {
                        out[j] = i;
                    }
                    out
                })
                .collect()
        };
        PairIso {
            plus: inv(&self.plus),
            minus: inv(&self.minus),
            swapped: self.swapped,
        }
    }

    /// Applies the relabeling to `p`.
    pub fn apply(&self, p: &BigraphPair) -> BigraphPair {
        p.relabel(&self.plus, &self.minus)
    }

    /// Checks that the map is a bijection onto `q` (or `opposite(q)`) that
    /// preserves edges and duals.
    pub fn verify(&self, p: &BigraphPair, q: &BigraphPair) -> bool {
        let target = if self.swapped { q.opposite() } else { q.clone() };
        let sizes_ok = |perms: &Vec<Vec<usize>>, g: &Bigraph| {
            perms.len() == g.max_depth() + 1
                && perms.iter().enumerate().all(|(d, perm)| {
                    let mut seen = vec![false; perm.len()];
                    perm.len() == g.layer_size(d)
                        && perm
                            .iter()
                            .all(|&j| j < perm.len() && !std::mem::replace(&mut seen[j], true))
                })
        };
        let shared_odd = self
            .plus
            .iter()
            .zip(&self.minus)
            .enumerate()
            .all(|(d, (a, b))| d % 2 == 0 || a == b);
        sizes_ok(&self.plus, p.plus()) && sizes_ok(&self.minus, p.minus()) && shared_odd && self.apply(p) == target
    }
}

struct Search<'a> {
    p: &'a BigraphPair,
    q: &'a BigraphPair,
    respect_duals: bool,
    slots: Vec<Slot>,
    map: [Vec<Vec<Option<usize>>>; 2],
    used: [Vec<Vec<bool>>; 2],
    valence: [[Vec<Vec<usize>>; 2]; 2],
    found: Vec<PairIso>,
    limit: usize,
}

#[derive(Clone, Copy)]
enum Slot {
    Shared(usize, usize),
    Side(usize, usize, usize),
}

fn graphs(p: &BigraphPair) -> [&Bigraph; 2] {
    [p.plus(), p.minus()]
}

fn valences(g: &Bigraph) -> Vec<Vec<usize>> {
    (0..=g.max_depth())
        .map(|d| g.layer(d).map(|v| g.valence(v)).collect())
        .collect()
}

impl<'a> Search<'a> {
    fn new(p: &'a BigraphPair, q: &'a BigraphPair, respect_duals: bool, limit: usize) -> Option<Self> {
        for (a, b) in graphs(p).into_iter().zip(graphs(q)) {
            if a.layer_sizes() != b.layer_sizes() {
                return None;
            }
        }
        let mut slots = Vec::new();
        for d in 0..=p.max_depth() {
            if d % 2 == 1 {
                slots.extend((0..p.plus().layer_size(d)).map(|i| Slot::Shared(d, i)));
            } else {
                for (s, g) in graphs(p).into_iter().enumerate() {
                    slots.extend((0..g.layer_size(d)).map(|i| Slot::Side(s, d, i)));
                }
            }
        }
        let blank =
            |g: &Bigraph| -> Vec<Vec<Option<usize>>> { g.layer_sizes().iter().map(|&n| vec![None; n]).collect() };
        let unused = |g: &Bigraph| -> Vec<Vec<bool>> { g.layer_sizes().iter().map(|&n| vec![false; n]).collect() };
        Some(Search {
            p,
            q,
            respect_duals,
            slots,
            map: [blank(p.plus()), blank(p.minus())],
            used: [unused(p.plus()), unused(p.minus())],
            valence: [
                [valences(p.plus()), valences(p.minus())],
                [valences(q.plus()), valences(q.minus())],
            ],
            found: Vec::new(),
            limit,
        })
    }

    /// Edge and dual consistency of sending `(d, i) -> (d, j)` on side `s`,
    /// given all shallower vertices and earlier same-layer vertices are mapped.
    fn consistent(&self, s: usize, d: usize, i: usize, j: usize) -> bool {
        let (gp, gq) = (graphs(self.p)[s], graphs(self.q)[s]);
        if self.valence[0][s][d][i] != self.valence[1][s][d][j] {
            return false;
        }
        if d > 0 {
            let (rp, rq) = (&gp.rows(d)[i], &gq.rows(d)[j]);
            let parents = &self.map[s][d - 1];
            if rp
                .iter()
                .enumerate()
                .any(|(k, &m)| rq[parents[k].expect("parents mapped first")] != m)
            {
                return false;
            }
        }
        if self.respect_duals && d % 2 == 0 {
            let dp = gp.duals()[d / 2][i];
            let dq = gq.duals()[d / 2][j];
            if dp == i {
                return dq == j;
            }
            if dq == j {
                return false;
            }
            if let Some(img) = self.map[s][d][dp] {
                return img == dq;
            }
            // the partner's slot must still be free
            return !self.used[s][d][dq];
        }
        true
    }

    fn go(&mut self, k: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if k == self.slots.len() {
            let fin = |m: &Vec<Vec<Option<usize>>>| -> Vec<Vec<usize>> {
                m.iter().map(|l| l.iter().map(|x| x.unwrap()).collect()).collect()
            };
            self.found.push(PairIso {
                plus: fin(&self.map[0]),
                minus: fin(&self.map[1]),
                swapped: false,
            });
            return;
        }
        match self.slots[k] {
            Slot::Shared(d, i) => {
                for j in 0..self.used[0][d].len() {
                    if self.used[0][d][j] || !self.consistent(0, d, i, j) || !self.consistent(1, d, i, j) {
                        continue;
                    }
                    for s in 0..2 {
                        self.map[s][d][i] = Some(j);
                        self.used[s][d][j] = true;
                    }
                    self.go(k + 1);
                    for s in 0..2 {
                        self.map[s][d][i] = None;
                        self.used[s][d][j] = false;
                    }
                }
            }
            Slot::Side(s, d, i) => {
                for j in 0..self.used[s][d].len() {
                    if self.used[s][d][j] || !self.consistent(s, d, i, j) {
                        continue;
                    }
                    self.map[s][d][i] = Some(j);
                    self.used[s][d][j] = true;
                    self.go(k + 1);
                    self.map[s][d][i] = None;
                    self.used[s][d][j] = false;
                }
            }
        }
    }
}

fn search(p: &BigraphPair, q: &BigraphPair, respect_duals: bool, limit: usize) -> Vec<PairIso> {
    match Search::new(p, q, respect_duals, limit) {
        Some(mut s) => {
            s.go(0);
            s.found
        }
        None => Vec::new(),
    }
}

/// Finds an isomorphism `p -> q`, or `p -> opposite(q)` when allowed.
pub fn pair_isomorphic(p: &BigraphPair, q: &BigraphPair, allow_opposite: bool) -> Option<PairIso> {
    if let Some(iso) = search(p, q, true, 1).pop() {
        return Some(iso);
    }
    if allow_opposite {
        let opp = q.opposite();
        if let Some(mut iso) = search(p, &opp, true, 1).pop() {
            iso.swapped = true;
            return Some(iso);
        }
    }
    None
}

/// All automorphisms of `p`. With `respect_duals` false, dual data is ignored
/// and only the layered graphs and the odd identification are preserved.
pub fn pair_automorphisms(p: &BigraphPair, respect_duals: bool) -> Vec<PairIso> {
    search(p, p, respect_duals, usize::MAX)
}

/// A uniformly random relabeling of `p` (shared on odd layers).
pub fn random_relabeling<R: rand::Rng + ?Sized>(p: &BigraphPair, rng: &mut R) -> PairIso {
    use rand::seq::SliceRandom;
    let shuffle = |n: usize, rng: &mut R| -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        v
    };
    // odd layers exist in both graphs with equal sizes, so `plus[d]` is defined
    let plus: Vec<Vec<usize>> = p.plus().layer_sizes().into_iter().map(|n| shuffle(n, rng)).collect();
    let minus = p
        .minus()
        .layer_sizes()
        .into_iter()
        .enumerate()
        .map(|(d, n)| if d % 2 == 1 { plus[d].clone() } else { shuffle(n, rng) })
        .collect();
    PairIso {
        plus,
        minus,
        swapped: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn random_relabeling_is_an_isomorphism() {
        let p = BigraphPair::parse(A_PLUS, A_MINUS).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = random_relabeling(&p, &mut rng);
            let q = r.apply(&p);
            assert!(r.verify(&p, &q));
            let found = pair_isomorphic(&p, &q, false).unwrap();
            assert!(found.verify(&p, &q));
        }
    }

    const Z4_PLUS: &str = "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v2x1x3";
    const G12: &str = "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v1x2x3";
    const G13: &str = "bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v3x2x1";
    const A_PLUS: &str = "bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3";
    const A_MINUS: &str = "bwd1v1v1v1p1p1v0x1x0p0x0x1v1x0p0x1duals1v1v1x2x3v2x1";
    const Z5: &str = "bwd1v1p1p1p1duals1v4x3x2x1";

    fn sym(s: &str) -> BigraphPair {
        BigraphPair::symmetric(s.parse().unwrap())
    }

    #[test]
    fn transposition_duals_match() {
        let iso = pair_isomorphic(&sym(G13), &sym(Z4_PLUS), false).unwrap();
        assert!(iso.verify(&sym(G13), &sym(Z4_PLUS)));
        assert!(pair_isomorphic(&sym(G12), &sym(Z4_PLUS), true).is_none());
    }

    #[test]
    fn reflexive_with_identity() {
        let p = BigraphPair::parse(A_PLUS, A_MINUS).unwrap();
        let iso = pair_isomorphic(&p, &p, false).unwrap();
        assert!(iso.verify(&p, &p));
    }

    #[test]
    fn alternating_pair_is_chiral() {
        let p = BigraphPair::parse(A_PLUS, A_MINUS).unwrap();
        assert!(pair_isomorphic(&p.opposite(), &p, false).is_none());
        let iso = pair_isomorphic(&p.opposite(), &p, true).unwrap();
        assert!(iso.swapped);
        assert!(iso.verify(&p.opposite(), &p));
    }

    #[test]
    fn cyclic_pair_is_self_opposite() {
        let p = sym(Z5);
        assert!(pair_isomorphic(&p.opposite(), &p, false).is_some());
    }

    #[test]
    fn automorphism_counts() {
        let p = sym(Z5);
        // (1 4)(2 3) has centralizer of order 8 in S4, one factor per graph
        assert_eq!(pair_automorphisms(&p, true).len(), 64);
        assert_eq!(pair_automorphisms(&p, false).len(), 576);
        for a in pair_automorphisms(&p, true) {
            assert!(a.verify(&p, &p));
        }
    }

    #[test]
    fn inverse_maps_back() {
        let (p, q) = (sym(G13), sym(Z4_PLUS));
        let iso = pair_isomorphic(&p, &q, false).unwrap();
        assert!(iso.inverse().verify(&q, &p));
    }
}
