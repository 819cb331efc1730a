//! The Cayley-Menger determinant of four points, its partial derivatives and
//! directional derivatives along edge subsets, and tetrahedrality tests.
//!
//! Coordinates are the six edge lengths in the fixed order
//! `(d12, d13, d14, d23, d24, d34)`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::int_det;
use crate::poly::Polynomial;

/// Endpoints (zero-based vertices) of each edge, in coordinate order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge joining vertices `i` and `j` (zero-based, any order).
pub fn edge_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    EDGES
        .iter()
        .position(|&e| e == (a, b))
        .expect("distinct vertices in 0..4")
}

pub fn edge_label(e: usize) -> String {
    let (a, b) = EDGES[e];
    format!("{}{}", a + 1, b + 1)
}

/// Faces of the tetrahedron as triples of edge indices.
pub const FACES: [[usize; 3]; 4] = [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeClass {
    SingleEdge,
    IncidentPair,
    OppositePair,
    Tripod,
    ThreePath,
    ThreeCycle,
    FourCycle,
    ComplementOfIncidentPair,
    ComplementOfEdge,
    FullK4,
}

/// A nonempty subset of the six edges of K4, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset(u8);

impl EdgeSubset {
    pub const K4: EdgeSubset = EdgeSubset(0b11_1111);

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask & 0b11_1111 == 0 || mask & !0b11_1111 != 0 {
            return Err(Error::EmptyEdgeSubset);
        }
        Ok(EdgeSubset(mask))
    }

    pub fn from_edges(edges: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &e in edges {
            if e >= 6 {
                return Err(Error::BadEdgeSpec(format!("edge index {e}")));
            }
            mask |= 1 << e;
        }
        Self::from_mask(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 & (1 << e) != 0
    }

    pub fn edges(self) -> impl Iterator<Item = usize> {
        (0..6).filter(move |&e| self.contains(e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement(self) -> Option<EdgeSubset> {
        EdgeSubset::from_mask(!self.0 & 0b11_1111).ok()
    }

    fn degrees(self) -> [usize; 4] {
        let mut deg = [0; 4];
        for e in self.edges() {
            deg[EDGES[e].0] += 1;
            deg[EDGES[e].1] += 1;
        }
        deg
    }

    /// Vertices touched by at least one edge of the subset.
    pub fn vertices(self) -> Vec<usize> {
        let deg = self.degrees();
        (0..4).filter(|&v| deg[v] > 0).collect()
    }

    pub fn class(self) -> EdgeClass {
        let deg = self.degrees();
        let touched = deg.iter().filter(|&&d| d > 0).count();
        match self.len() {
            1 => EdgeClass::SingleEdge,
            2 if touched == 3 => EdgeClass::IncidentPair,
            2 => EdgeClass::OppositePair,
            3 if deg.contains(&3) => EdgeClass::Tripod,
            3 if touched == 3 => EdgeClass::ThreeCycle,
            3 => EdgeClass::ThreePath,
            4 if deg.iter().all(|&d| d == 2) => EdgeClass::FourCycle,
            4 => EdgeClass::ComplementOfIncidentPair,
            5 => EdgeClass::ComplementOfEdge,
            _ => EdgeClass::FullK4,
        }
    }

    /// The complement is not a nonempty star at one vertex.
    pub fn is_friendly(self) -> bool {
        let Some(rest) = self.complement() else {
            return true;
        };
        let deg = rest.degrees();
        !deg.iter().any(|&d| d == rest.len())
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == EdgeSubset::K4 {
            return write!(f, "K4");
        }
        let labels: Vec<String> = self.edges().map(edge_label).collect();
        write!(f, "{}", labels.join(","))
    }
}

impl FromStr for EdgeSubset {
    type Err = Error;

    /// Accepts `K4` / `all`, or edge labels like `12,34` (optionally `e12`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("k4") || t.eq_ignore_ascii_case("all") {
            return Ok(EdgeSubset::K4);
        }
        let mut edges = Vec::new();
        for tok in t.split([',', ' ', '+']).filter(|x| !x.is_empty()) {
            let tok = tok.trim_start_matches(['e', 'E']);
            let digits: Vec<u32> = tok.chars().filter_map(|c| c.to_digit(10)).collect();
            if digits.len() != 2 || tok.len() != 2 {
                return Err(Error::BadEdgeSpec(s.to_string()));
            }
            let (a, b) = (digits[0] as usize, digits[1] as usize);
            if !(1..=4).contains(&a) || !(1..=4).contains(&b) || a == b {
                return Err(Error::BadEdgeSpec(s.to_string()));
            }
            edges.push(edge_index(a - 1, b - 1));
        }
        if edges.is_empty() {
            return Err(Error::EmptyEdgeSubset);
        }
        EdgeSubset::from_edges(&edges)
    }
}

impl Serialize for EdgeSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Symbolic determinant by cofactor expansion along the first row.
fn det_poly(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    let nvars = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Polynomial::zero(nvars);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * &det_poly(&minor);
        total = if c % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

/// Bordered matrix whose off-diagonal block holds `entry(edge)`.
fn bordered<T: Clone>(zero: T, one: T, entry: impl Fn(usize) -> T) -> Vec<Vec<T>> {
    let mut m = vec![vec![zero.clone(); 5]; 5];
    for k in 1..5 {
        m[0][k] = one.clone();
        m[k][0] = one.clone();
    }
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        m[i + 1][j + 1] = entry(e);
        m[j + 1][i + 1] = entry(e);
    }
    m
}

fn compute_f(squared: bool) -> Polynomial {
    let m = bordered(Polynomial::zero(6), Polynomial::one(6), |e| {
        let x = Polynomial::var(6, e);
        if squared {
            &x * &x
        } else {
            x
        }
    });
    det_poly(&m)
}

/// The Cayley-Menger determinant `f` as a polynomial in the edge lengths.
pub fn build_f() -> Polynomial {
    static F: OnceLock<Polynomial> = OnceLock::new();
    F.get_or_init(|| compute_f(true)).clone()
}

/// The same determinant as a cubic in the squared lengths `q_ij = d_ij^2`.
pub fn build_f_on_squares() -> Polynomial {
    static FHAT: OnceLock<Polynomial> = OnceLock::new();
    FHAT.get_or_init(|| compute_f(false)).clone()
}

/// `D_beta f`: the sum of the partials of `f` over the edges of `beta`.
pub fn directional_derivative(beta: EdgeSubset) -> Polynomial {
    static PARTIALS: OnceLock<Vec<Polynomial>> = OnceLock::new();
    let partials = PARTIALS.get_or_init(|| {
        let f = build_f();
        (0..6).map(|e| f.partial_derivative(e).unwrap()).collect()
    });
    beta.edges()
        .fold(Polynomial::zero(6), |acc, e| &acc + &partials[e])
}

/// Integer combination `a*g + b*f` for `g = D_beta f`.
pub fn combination(beta: EdgeSubset, g_coeff: i64, f_coeff: i64) -> Polynomial {
    let g = directional_derivative(beta).scale(&g_coeff.into());
    let f = build_f().scale(&f_coeff.into());
    &g + &f
}

/// Direct numeric evaluation of the determinant, without the stored polynomial.
pub fn cm_determinant_value(d: &[BigInt]) -> BigInt {
    let m = bordered(BigInt::zero(), BigInt::one(), |e| &d[e] * &d[e]);
    int_det(&m)
}

/// Numeric `D_beta f` through cofactors of the bordered matrix.
///
/// `df/dd_e = 4 d_e C_ij`, where `C_ij` is the cofactor at the entry holding
/// `d_e^2` (the entry appears twice, symmetrically).
pub fn directional_derivative_value(beta: EdgeSubset, d: &[BigInt]) -> BigInt {
    let m = bordered(BigInt::zero(), BigInt::one(), |e| &d[e] * &d[e]);
    let mut total = BigInt::zero();
    for e in beta.edges() {
        let (i, j) = (EDGES[e].0 + 1, EDGES[e].1 + 1);
        let minor: Vec<Vec<BigInt>> = (0..5)
            .filter(|&r| r != i)
            .map(|r| {
                (0..5)
                    .filter(|&c| c != j)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        let mut cof = int_det(&minor);
        if (i + j) % 2 == 1 {
            cof = -cof;
        }
        total += BigInt::from(4) * &d[e] * cof;
    }
    total
}

/// Clears denominators, returning a positive integer multiple of `d`.
pub fn clear_denominators(d: &[BigRational]) -> Vec<BigInt> {
    let l = d
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    d.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

fn check_positive(d: &[BigRational]) -> Result<()> {
    if d.len() != 6 {
        return Err(Error::Arity {
            expected: 6,
            got: d.len(),
        });
    }
    match d.iter().position(|x| !x.is_positive()) {
        Some(index) => Err(Error::NonPositive { index }),
        None => Ok(()),
    }
}

/// Strict triangle inequalities on the three edges of a face.
pub fn strict_triangle(a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
    a < &(b + c) && b < &(a + c) && c < &(a + b)
}

/// The list is realized by four distinct, affinely independent points.
///
/// Criterion: strict triangle inequalities on every face and `f > 0`.
pub fn is_tetrahedral(d: &[BigRational]) -> Result<bool> {
    check_positive(d)?;
    let n = clear_denominators(d);
    Ok(is_tetrahedral_int(&n))
}

/// Integer form of [`is_tetrahedral`]; nonpositive entries give `false`.
pub fn is_tetrahedral_int(d: &[BigInt]) -> bool {
    if d.iter().any(|x| !x.is_positive()) {
        return false;
    }
    let faces_ok = FACES
        .iter()
        .all(|&[a, b, c]| strict_triangle(&d[a], &d[b], &d[c]));
    faces_ok && build_f().evaluate(d).unwrap().is_positive()
}

pub fn is_tetrahedral_i64(d: &[i64; 6]) -> bool {
    let big: Vec<BigInt> = d.iter().map(|&x| x.into()).collect();
    is_tetrahedral_int(&big)
}

/// Squared volume `f(D) / 288`.
pub fn volume_squared(d: &[BigRational]) -> Result<BigRational> {
    if !is_tetrahedral(d)? {
        return Err(Error::NotTetrahedral);
    }
    let f = build_f().evaluate_rational(d)?;
    Ok(f / BigRational::from_integer(288.into()))
}
