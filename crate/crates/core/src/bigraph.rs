//! Principal graph pairs and their compact `bwd...duals...` text encoding.
//!
//! A [`Bigraph`] is a depth-graded bipartite graph rooted at a single depth-0
//! vertex (the ★ vertex). Each vertex at depth `d >= 1` carries a row of edge
//! multiplicities to the vertices at depth `d - 1`; each even depth carries a
//! duality involution. A [`BigraphPair`] couples two such graphs whose odd
//! vertices are identified by position within each odd layer.
//!
//! ```
//! use subfactor_index5::Bigraph;
//!
//! let g: Bigraph = "bwd1v1p1p1p1duals1v4x3x2x1".parse().unwrap();
//! assert_eq!(g.layer_sizes(), vec![1, 1, 4]);
//! assert_eq!(g.to_string(), "bwd1v1p1p1p1duals1v4x3x2x1");
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex, addressed by depth and by 0-based position within its layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub depth: usize,
    pub index: usize,
}

impl Vertex {
    pub const STAR: Vertex = Vertex { depth: 0, index: 0 };

    pub fn new(depth: usize, index: usize) -> Self {
        Vertex { depth, index }
    }

    pub fn is_even(&self) -> bool {
        self.depth % 2 == 0
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based within the layer, matching the dual notation
        write!(f, "d{}#{}", self.depth, self.index + 1)
    }
}

/// Which graph of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Plus => f.write_str("plus"),
            Side::Minus => f.write_str("minus"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("depth {depth} vertex {vertex}: row has {found} slots but depth {parent_depth} has {expected} vertices", parent_depth = depth - 1)]
    RowLength {
        depth: usize,
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("depth {depth} vertex {vertex} has no edge to the previous depth")]
    Orphan { depth: usize, vertex: usize },
    #[error("expected {expected} dual permutations (one per even depth), found {found}")]
    DualCount { expected: usize, found: usize },
    #[error("dual permutation at depth {depth} has {found} entries but the layer has {expected} vertices")]
    DualLength {
        depth: usize,
        expected: usize,
        found: usize,
    },
    #[error("dual permutation at depth {depth}: entry {entry} is out of range")]
    DualRange { depth: usize, entry: usize },
    #[error("dual permutation at depth {depth} is not an involution")]
    DualNotInvolution { depth: usize },
    #[error("odd depth {depth}: plus graph has {plus} vertices, minus graph has {minus}")]
    OddLayerMismatch { depth: usize, plus: usize, minus: usize },
    #[error("maximum depths {plus} and {minus} differ by more than one")]
    DepthMismatch { plus: usize, minus: usize },
}

/// One principal graph with its dual data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bigraph {
    /// `rows[d][i][j]` is the multiplicity between vertex `i` at depth `d + 1`
    /// and vertex `j` at depth `d`.
    rows: Vec<Vec<Vec<u8>>>,
    /// `duals[k]` is the involution (0-based images) on the layer at depth `2k`.
    duals: Vec<Vec<usize>>,
}

impl Bigraph {
    /// Builds and validates a graph from multiplicity rows and dual involutions.
    pub fn new(rows: Vec<Vec<Vec<u8>>>, duals: Vec<Vec<usize>>) -> Result<Self, CodecError> {
        let g = Bigraph { rows, duals };
        g.validate()?;
        Ok(g)
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<(), CodecError> {
        let mut prev = 1usize;
        for (k, layer) in self.rows.iter().enumerate() {
            let depth = k + 1;
            if layer.is_empty() {
                return Err(CodecError::Syntax {
                    pos: 0,
                    msg: format!("depth {depth} is empty"),
                });
            }
            for (i, row) in layer.iter().enumerate() {
                if row.len() != prev {
                    return Err(CodecError::RowLength {
                        depth,
                        vertex: i + 1,
                        expected: prev,
                        found: row.len(),
                    });
                }
                if row.iter().all(|&m| m == 0) {
                    return Err(CodecError::Orphan { depth, vertex: i + 1 });
                }
            }
            prev = layer.len();
        }
        let expected = self.max_depth() / 2 + 1;
        if self.duals.len() != expected {
            return Err(CodecError::DualCount {
                expected,
                found: self.duals.len(),
            });
        }
        for (k, perm) in self.duals.iter().enumerate() {
            let depth = 2 * k;
            let size = self.layer_size(depth);
            if perm.len() != size {
                return Err(CodecError::DualLength {
                    depth,
                    expected: size,
                    found: perm.len(),
                });
            }
            if let Some(&bad) = perm.iter().find(|&&x| x >= size) {
                return Err(CodecError::DualRange { depth, entry: bad + 1 });
            }
            if perm.iter().enumerate().any(|(i, &j)| perm[j] != i) {
                return Err(CodecError::DualNotInvolution { depth });
            }
        }
        Ok(())
    }

    /// The two-vertex graph with a single edge.
    pub fn single_edge() -> Self {
        Bigraph {
            rows: vec![vec![vec![1]]],
            duals: vec![vec![0]],
        }
    }

    /// The path with `length` edges starting at ★.
    pub fn path(length: usize) -> Self {
        let rows = (0..length).map(|_| vec![vec![1]]).collect::<Vec<_>>();
        let duals = (0..=length / 2).map(|_| vec![0]).collect();
        Bigraph { rows, duals }
    }

    pub fn max_depth(&self) -> usize {
        self.rows.len()
    }

    pub fn layer_size(&self, depth: usize) -> usize {
        match depth {
            0 => 1,
            d if d <= self.rows.len() => self.rows[d - 1].len(),
            _ => 0,
        }
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        (0..=self.max_depth()).map(|d| self.layer_size(d)).collect()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.rows.iter().map(Vec::len).sum::<usize>()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..=self.max_depth()).flat_map(move |d| (0..self.layer_size(d)).map(move |i| Vertex::new(d, i)))
    }

    pub fn layer(&self, depth: usize) -> impl Iterator<Item = Vertex> {
        (0..self.layer_size(depth)).map(move |i| Vertex::new(depth, i))
    }

    /// Multiplicity rows of the layer at `depth >= 1`.
    pub fn rows(&self, depth: usize) -> &[Vec<u8>] {
        &self.rows[depth - 1]
    }

    /// Multiplicity of the edge between `child` and vertex `parent` one depth up.
    pub fn multiplicity(&self, child: Vertex, parent: usize) -> u8 {
        self.rows[child.depth - 1][child.index][parent]
    }

    /// Multiplicity between two arbitrary vertices (zero unless adjacent depths).
    pub fn edge(&self, u: Vertex, v: Vertex) -> u8 {
        let (child, parent) = if u.depth == v.depth + 1 {
            (u, v)
        } else if v.depth == u.depth + 1 {
            (v, u)
        } else {
            return 0;
        };
        self.multiplicity(child, parent.index)
    }

    pub fn parents(&self, v: Vertex) -> Vec<(Vertex, u8)> {
        if v.depth == 0 {
            return Vec::new();
        }
        self.rows[v.depth - 1][v.index]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(j, &m)| (Vertex::new(v.depth - 1, j), m))
            .collect()
    }

    pub fn children(&self, v: Vertex) -> Vec<(Vertex, u8)> {
        if v.depth >= self.max_depth() {
            return Vec::new();
        }
        self.rows[v.depth]
            .iter()
            .enumerate()
            .filter(|(_, row)| row[v.index] > 0)
            .map(|(i, row)| (Vertex::new(v.depth + 1, i), row[v.index]))
            .collect()
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<(Vertex, u8)> {
        let mut out = self.parents(v);
        out.extend(self.children(v));
        out
    }

    /// Sum of edge multiplicities at `v`.
    pub fn valence(&self, v: Vertex) -> usize {
        self.neighbors(v).iter().map(|&(_, m)| m as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().flatten().flatten().map(|&m| m as usize).sum()
    }

    pub fn is_simply_laced(&self) -> bool {
        self.rows.iter().flatten().flatten().all(|&m| m <= 1)
    }

    /// The dual of an even vertex; `None` for odd vertices.
    pub fn dual(&self, v: Vertex) -> Option<Vertex> {
        if !v.is_even() {
            return None;
        }
        Some(Vertex::new(v.depth, self.duals[v.depth / 2][v.index]))
    }

    /// Dual involutions, one per even depth, 0-based.
    pub fn duals(&self) -> &[Vec<usize>] {
        &self.duals
    }

    /// Applies per-depth permutations: vertex `(d, i)` moves to `(d, perms[d][i])`.
    pub fn relabel(&self, perms: &[Vec<usize>]) -> Bigraph {
        let rows = (1..=self.max_depth())
            .map(|d| {
                let size = self.layer_size(d);
                let mut layer = vec![Vec::new(); size];
                for i in 0..size {
                    let old = &self.rows[d - 1][i];
                    let mut row = vec![0u8; old.len()];
                    for (j, &m) in old.iter().enumerate() {
                        row[perms[d - 1][j]] = m;
                    }
                    layer[perms[d][i]] = row;
                }
                layer
            })
            .collect();
        let duals = self
            .duals
            .iter()
            .enumerate()
            .map(|(k, perm)| {
                let p = &perms[2 * k];
                let mut out = vec![0; perm.len()];
                for (i, &j) in perm.iter().enumerate() {
                    out[p[i]] = p[j];
                }
                out
            })
            .collect();
        Bigraph { rows, duals }
    }

    /// Graph with depths up to and including `depth`.
    pub fn truncate(&self, depth: usize) -> Bigraph {
        let depth = depth.min(self.max_depth());
        Bigraph {
            rows: self.rows[..depth].to_vec(),
            duals: self.duals[..=depth / 2].to_vec(),
        }
    }

    pub(crate) fn from_parts_unchecked(rows: Vec<Vec<Vec<u8>>>, duals: Vec<Vec<usize>>) -> Self {
        Bigraph { rows, duals }
    }

    pub(crate) fn into_parts(self) -> (Vec<Vec<Vec<u8>>>, Vec<Vec<usize>>) {
        (self.rows, self.duals)
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CodecError> {
        Err(CodecError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn digit(&mut self) -> Result<u8, CodecError> {
        match self.peek() {
            Some(c @ b'0'..=b'9') => {
                self.pos += 1;
                Ok(c - b'0')
            }
            Some(c) => self.err(format!("expected a digit, found '{}'", c as char)),
            None => self.err("expected a digit, found end of input"),
        }
    }

    fn index(&mut self) -> Result<usize, CodecError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.peek() {
                Some(c) => self.err(format!("expected an index, found '{}'", c as char)),
                None => self.err("expected an index, found end of input"),
            };
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        match text.parse::<usize>() {
            Ok(0) => Err(CodecError::Syntax {
                pos: start,
                msg: "dual indices are 1-based".into(),
            }),
            Ok(n) => Ok(n - 1),
            Err(_) => Err(CodecError::Syntax {
                pos: start,
                msg: "index out of range".into(),
            }),
        }
    }

    fn vertex(&mut self) -> Result<Vec<u8>, CodecError> {
        let mut row = vec![self.digit()?];
        while self.eat("x") {
            row.push(self.digit()?);
        }
        Ok(row)
    }

    fn layer(&mut self) -> Result<Vec<Vec<u8>>, CodecError> {
        let mut layer = vec![self.vertex()?];
        while self.eat("p") {
            layer.push(self.vertex()?);
        }
        Ok(layer)
    }

    fn dual_layer(&mut self) -> Result<Vec<usize>, CodecError> {
        let mut perm = vec![self.index()?];
        while self.eat("x") {
            perm.push(self.index()?);
        }
        Ok(perm)
    }
}

/// Decodes the `bwd...duals...` notation.
pub fn parse_bigraph(text: &str) -> Result<Bigraph, CodecError> {
    let mut s = Scanner {
        bytes: text.as_bytes(),
        pos: 0,
    };
    if !s.eat("bwd") {
        return s.err("expected prefix \"bwd\"");
    }
    let mut rows = vec![s.layer()?];
    loop {
        if s.eat("duals") {
            break;
        }
        if s.eat("v") {
            rows.push(s.layer()?);
            continue;
        }
        return match s.peek() {
            Some(c) => s.err(format!("expected 'v', 'p', 'x' or \"duals\", found '{}'", c as char)),
            None => s.err("unexpected end of input before \"duals\""),
        };
    }
    let mut duals = vec![s.dual_layer()?];
    while s.eat("v") {
        duals.push(s.dual_layer()?);
    }
    if s.pos != s.bytes.len() {
        return s.err("trailing characters after dual data");
    }
    Bigraph::new(rows, duals)
}

/// Encodes a graph; inverse of [`parse_bigraph`] on valid input.
pub fn serialize_bigraph(g: &Bigraph) -> String {
    g.to_string()
}

impl FromStr for Bigraph {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_bigraph(s)
    }
}

impl fmt::Display for Bigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("bwd")?;
        for (k, layer) in self.rows.iter().enumerate() {
            if k > 0 {
                f.write_str("v")?;
            }
            for (i, row) in layer.iter().enumerate() {
                if i > 0 {
                    f.write_str("p")?;
                }
                for (j, m) in row.iter().enumerate() {
                    if j > 0 {
                        f.write_str("x")?;
                    }
                    write!(f, "{m}")?;
                }
            }
        }
        f.write_str("duals")?;
        for (k, perm) in self.duals.iter().enumerate() {
            if k > 0 {
                f.write_str("v")?;
            }
            for (i, j) in perm.iter().enumerate() {
                if i > 0 {
                    f.write_str("x")?;
                }
                write!(f, "{}", j + 1)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Bigraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bigraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A principal graph pair `(plus, minus)` with odd vertices identified by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct BigraphPair {
    plus: Bigraph,
    minus: Bigraph,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    plus: Bigraph,
    minus: Bigraph,
}

impl TryFrom<RawPair> for BigraphPair {
    type Error = CodecError;

    fn try_from(raw: RawPair) -> Result<Self, Self::Error> {
        BigraphPair::new(raw.plus, raw.minus)
    }
}

impl From<BigraphPair> for RawPair {
    fn from(p: BigraphPair) -> Self {
        RawPair {
            plus: p.plus,
            minus: p.minus,
        }
    }
}

impl BigraphPair {
    /// Checks the odd-layer identification and the depth constraint.
    pub fn new(plus: Bigraph, minus: Bigraph) -> Result<Self, CodecError> {
        let (dp, dm) = (plus.max_depth(), minus.max_depth());
        for depth in (1..=dp.max(dm)).step_by(2) {
            let (a, b) = (plus.layer_size(depth), minus.layer_size(depth));
            if a != b {
                return Err(CodecError::OddLayerMismatch {
                    depth,
                    plus: a,
                    minus: b,
                });
            }
        }
        if dp.abs_diff(dm) > 1 {
            return Err(CodecError::DepthMismatch { plus: dp, minus: dm });
        }
        Ok(BigraphPair { plus, minus })
    }

    /// Parses both strings and pairs them.
    pub fn parse(plus: &str, minus: &str) -> Result<Self, CodecError> {
        BigraphPair::new(plus.parse()?, minus.parse()?)
    }

    /// A pair whose two graphs coincide.
    pub fn symmetric(g: Bigraph) -> Self {
        BigraphPair {
            plus: g.clone(),
            minus: g,
        }
    }

    pub fn plus(&self) -> &Bigraph {
        &self.plus
    }

    pub fn minus(&self) -> &Bigraph {
        &self.minus
    }

    pub fn graph(&self, side: Side) -> &Bigraph {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    pub fn max_depth(&self) -> usize {
        self.plus.max_depth().max(self.minus.max_depth())
    }

    /// Swaps the two graphs; odd identification is unchanged.
    pub fn opposite(&self) -> BigraphPair {
        BigraphPair {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    /// Relabels both graphs. Odd layers use `plus_perms` on both sides so the
    /// identification is carried along.
    pub fn relabel(&self, plus_perms: &[Vec<usize>], minus_perms: &[Vec<usize>]) -> BigraphPair {
        let minus_perms: Vec<Vec<usize>> = (0..=self.minus.max_depth())
            .map(|d| {
                if d % 2 == 1 {
                    plus_perms[d].clone()
                } else {
                    minus_perms[d].clone()
                }
            })
            .collect();
        BigraphPair {
            plus: self.plus.relabel(plus_perms),
            minus: self.minus.relabel(&minus_perms),
        }
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        self.plus.validate()?;
        self.minus.validate()?;
        BigraphPair::new(self.plus.clone(), self.minus.clone()).map(|_| ())
    }
}

impl fmt::Display for BigraphPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.plus, self.minus)
    }
}

/// Outcome of [`make_pair`]: the validated pair plus the advisory norm check.
#[derive(Clone, Debug)]
pub struct MadePair {
    pub pair: BigraphPair,
    /// Whether both graphs have exactly the same norm. Advisory only.
    pub norms_agree: bool,
}

/// Pairs two graphs and compares their exact norms.
pub fn make_pair(plus: Bigraph, minus: Bigraph) -> Result<MadePair, CodecError> {
    let pair = BigraphPair::new(plus, minus)?;
    let a = crate::spectral::norm_squared(pair.plus(), None);
    let b = crate::spectral::norm_squared(pair.minus(), None);
    let norms_agree = crate::spectral::same_norm(&a, &b);
    Ok(MadePair { pair, norms_agree })
}

/// Swaps plus and minus.
pub fn opposite(p: &BigraphPair) -> BigraphPair {
    p.opposite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cyclic_five() {
        let g = parse_bigraph("bwd1v1p1p1p1duals1v4x3x2x1").unwrap();
        assert_eq!(g.layer_sizes(), vec![1, 1, 4]);
        for i in 0..4 {
            assert_eq!(g.parents(Vertex::new(2, i)), vec![(Vertex::new(1, 0), 1)]);
        }
        assert_eq!(g.duals()[1], vec![3, 2, 1, 0]);
        assert_eq!(g.dual(Vertex::new(2, 0)), Some(Vertex::new(2, 3)));
        assert_eq!(g.dual(Vertex::new(1, 0)), None);
    }

    #[test]
    fn minimal_string() {
        let g = parse_bigraph("bwd1duals1").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g, Bigraph::single_edge());
        assert_eq!(serialize_bigraph(&Bigraph::single_edge()), "bwd1duals1");
    }

    #[test]
    fn row_length_mismatch() {
        let err = parse_bigraph("bwd1v2x1duals1v1").unwrap_err();
        assert_eq!(
            err,
            CodecError::RowLength {
                depth: 2,
                vertex: 1,
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_bigraph("bwd1v1q1duals1v1") {
            Err(CodecError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_bigraph("bwx1duals1"),
            Err(CodecError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(parse_bigraph("bwd1"), Err(CodecError::Syntax { pos: 4, .. })));
        assert!(matches!(
            parse_bigraph("bwd1duals1v"),
            Err(CodecError::Syntax { pos: 11, .. })
        ));
        assert!(matches!(parse_bigraph("bwd1duals0"), Err(CodecError::Syntax { .. })));
        // multiplicities are single digits
        assert!(parse_bigraph("bwd10duals1").is_err());
    }

    #[test]
    fn dual_errors() {
        assert_eq!(
            parse_bigraph("bwd1v1p1duals1v2x2").unwrap_err(),
            CodecError::DualNotInvolution { depth: 2 }
        );
        assert_eq!(
            parse_bigraph("bwd1v1p1duals1v1").unwrap_err(),
            CodecError::DualLength {
                depth: 2,
                expected: 2,
                found: 1
            }
        );
        assert_eq!(
            parse_bigraph("bwd1v1p1duals1v1x3").unwrap_err(),
            CodecError::DualRange { depth: 2, entry: 3 }
        );
        assert_eq!(
            parse_bigraph("bwd1v1duals1").unwrap_err(),
            CodecError::DualCount { expected: 2, found: 1 }
        );
    }

    #[test]
    fn orphan_vertex_rejected() {
        assert_eq!(
            parse_bigraph("bwd1v1p0duals1v1x2").unwrap_err(),
            CodecError::Orphan { depth: 2, vertex: 2 }
        );
    }

    #[test]
    fn roundtrip_dihedral() {
        let s = "bwd1v1p1v1x1v1duals1v1x2v1";
        assert_eq!(parse_bigraph(s).unwrap().to_string(), s);
    }

    #[test]
    fn pair_odd_layers_must_match() {
        let z5: Bigraph = "bwd1v1p1p1p1duals1v4x3x2x1".parse().unwrap();
        let d10: Bigraph = "bwd1v1p1v1x1v1duals1v1x2v1".parse().unwrap();
        assert!(BigraphPair::new(z5.clone(), z5.clone()).is_ok());
        // depth 3 exists only in the dihedral graph
        assert_eq!(
            BigraphPair::new(z5, d10).unwrap_err(),
            CodecError::OddLayerMismatch {
                depth: 3,
                plus: 0,
                minus: 1
            }
        );
    }

    #[test]
    fn make_pair_reports_norm_agreement() {
        let plus: Bigraph = "bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3".parse().unwrap();
        let minus: Bigraph = "bwd1v1v1v1p1p1v0x1x0p0x0x1v1x0p0x1duals1v1v1x2x3v2x1".parse().unwrap();
        let made = make_pair(plus, minus).unwrap();
        assert!(made.norms_agree);

        let a = Bigraph::path(2);
        let b: Bigraph = "bwd1v1p1duals1v1x2".parse().unwrap();
        let made = make_pair(a, b).unwrap();
        assert!(!made.norms_agree);
    }

    #[test]
    fn opposite_is_involution() {
        let p = BigraphPair::parse(
            "bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3",
            "bwd1v1v1v1p1p1v0x1x0p0x0x1v1x0p0x1duals1v1v1x2x3v2x1",
        )
        .unwrap();
        assert_eq!(opposite(&opposite(&p)), p);
        assert_ne!(opposite(&p), p);
    }

    #[test]
    fn relabel_keeps_validity() {
        let g: Bigraph = "bwd1v1p1p1p1duals1v4x3x2x1".parse().unwrap();
        let h = g.relabel(&[vec![0], vec![0], vec![1, 2, 3, 0]]);
        h.validate().unwrap();
        assert_eq!(h.duals()[1], vec![1, 0, 3, 2]);
    }

    #[test]
    fn pair_json_roundtrip() {
        let p = BigraphPair::parse("bwd1v1p1v1x1v1duals1v1x2v1", "bwd1v1p1v1x1v1duals1v1x2v1").unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"plus":"bwd1v1p1v1x1v1duals1v1x2v1","minus":"bwd1v1p1v1x1v1duals1v1x2v1"}"#
        );
        let back: BigraphPair = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
