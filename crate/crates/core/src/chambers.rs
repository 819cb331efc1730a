//! Polyhedral structure of the normalized pseudo-tetrahedron space `X24`:
//! the seven extrema, the 3-, 4-, 12- and 48-simplex partitions, the 48
//! decorations of K4 and the chamber inequalities they induce.
//!
//! Everything here is exact; integer points stand for rays of the cone `X`,
//! so membership tests on scaled points agree with tests on `X24`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley_menger::{edge_index, EdgeClass, EdgeSubset, EDGES, FACES};
use crate::error::{Error, Result};
use crate::linalg::{int_det_i64, rank_i64, rational_inverse};

pub type Point6 = [i64; 6];

pub const CENTER: Point6 = [4, 4, 4, 4, 4, 4];

pub const A_EXTREMA: [Point6; 3] = [
    [0, 6, 6, 6, 6, 0],
    [6, 0, 6, 6, 0, 6],
    [6, 6, 0, 0, 6, 6],
];

pub const B_EXTREMA: [Point6; 4] = [
    [8, 8, 8, 0, 0, 0],
    [8, 0, 0, 8, 8, 0],
    [0, 8, 0, 8, 0, 8],
    [0, 0, 8, 0, 8, 8],
];

/// Opposite edge pairs: `(12)(34)`, `(13)(24)`, `(14)(23)`.
pub const AXES: [[usize; 2]; 3] = [[0, 5], [1, 4], [2, 3]];

/// Edges incident to each vertex.
pub const VERTEX_EDGES: [[usize; 3]; 4] = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremePoint {
    pub label: String,
    pub coords: Point6,
}

pub fn extrema() -> Vec<ExtremePoint> {
    let a = A_EXTREMA.iter().enumerate().map(|(i, p)| ExtremePoint {
        label: format!("A{}", i + 1),
        coords: *p,
    });
    let b = B_EXTREMA.iter().enumerate().map(|(i, p)| ExtremePoint {
        label: format!("B{}", i + 1),
        coords: *p,
    });
    a.chain(b).collect()
}

fn midpoint(p: &Point6, q: &Point6) -> Point6 {
    let mut m = [0; 6];
    for k in 0..6 {
        debug_assert!((p[k] + q[k]) % 2 == 0);
        m[k] = (p[k] + q[k]) / 2;
    }
    m
}

/// `A_ij = (A_i + A_j) / 2`, one-based.
pub fn a_mid(i: usize, j: usize) -> Point6 {
    midpoint(&A_EXTREMA[i - 1], &A_EXTREMA[j - 1])
}

/// `B_ij = (B_i + B_j) / 2`, one-based.
pub fn b_mid(i: usize, j: usize) -> Point6 {
    midpoint(&B_EXTREMA[i - 1], &B_EXTREMA[j - 1])
}

pub fn vertex_sums<T>(p: &[T]) -> [T; 4]
where
    T: Clone + std::ops::Add<Output = T>,
{
    VERTEX_EDGES.map(|[a, b, c]| p[a].clone() + p[b].clone() + p[c].clone())
}

pub fn axis_sums<T>(p: &[T]) -> [T; 3]
where
    T: Clone + std::ops::Add<Output = T>,
{
    AXES.map(|[a, b]| p[a].clone() + p[b].clone())
}

/// Nonnegative entries and the non-strict triangle inequality on every face.
pub fn in_pseudo_cone<T>(p: &[T]) -> bool
where
    T: Clone + PartialOrd + Zero + std::ops::Add<Output = T>,
{
    p.iter().all(|x| *x >= T::zero())
        && FACES.iter().all(|&[a, b, c]| {
            p[a] <= p[b].clone() + p[c].clone()
                && p[b] <= p[a].clone() + p[c].clone()
                && p[c] <= p[a].clone() + p[b].clone()
        })
}

/// A permutation of the four vertex labels (zero-based): `v -> self.0[v]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4(pub [usize; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let set: BTreeSet<_> = p.iter().collect();
                        if set.len() == 4 {
                            out.push(Perm4(p));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn even() -> Vec<Perm4> {
        Self::all().into_iter().filter(Perm4::is_even).collect()
    }

    pub fn is_even(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        Perm4(other.0.map(|v| self.0[v]))
    }

    /// Induced permutation of the six edge coordinates.
    pub fn edge_permutation(&self) -> [usize; 6] {
        EDGES.map(|(i, j)| edge_index(self.0[i], self.0[j]))
    }

    /// Relabeled point: the label of edge `e` moves to edge `sigma(e)`.
    pub fn act<T: Clone>(&self, p: &[T; 6]) -> [T; 6] {
        let perm = self.edge_permutation();
        let mut out = p.clone();
        for e in 0..6 {
            out[perm[e]] = p[e].clone();
        }
        out
    }

    pub fn act_subset(&self, beta: EdgeSubset) -> EdgeSubset {
        let perm = self.edge_permutation();
        let edges: Vec<usize> = beta.edges().map(|e| perm[e]).collect();
        EdgeSubset::from_edges(&edges).expect("nonempty image")
    }

    pub fn stabilizer(beta: EdgeSubset) -> Vec<Perm4> {
        Self::all()
            .into_iter()
            .filter(|s| s.act_subset(beta) == beta)
            .collect()
    }
}

/// Coordinate permutation induced by relabeling the vertices of K4.
pub fn relabel_action(sigma: &Perm4) -> [usize; 6] {
    sigma.edge_permutation()
}

/// A 5-simplex in `R^6` with integer vertices; vertex order is significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeSimplex6 {
    pub id: String,
    pub vertices: [Point6; 6],
}

impl LatticeSimplex6 {
    /// Validates nonnegativity, membership in `X` and affine independence.
    pub fn new(id: impl Into<String>, vertices: [Point6; 6]) -> Result<Self> {
        let s = LatticeSimplex6 {
            id: id.into(),
            vertices,
        };
        if !s.vertices.iter().all(|v| in_pseudo_cone(v)) {
            return Err(Error::OutsideCone);
        }
        if !s.is_nondegenerate() {
            return Err(Error::DegenerateSimplex(s.id));
        }
        Ok(s)
    }

    pub fn difference_matrix(&self) -> Vec<Vec<i64>> {
        (1..6)
            .map(|k| (0..6).map(|c| self.vertices[k][c] - self.vertices[0][c]).collect())
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        rank_i64(&self.difference_matrix()) == 5
    }

    /// `W`: the 6x6 matrix whose columns are the vertices.
    pub fn vertex_matrix(&self) -> Vec<Vec<i64>> {
        (0..6)
            .map(|r| (0..6).map(|c| self.vertices[c][r]).collect())
            .collect()
    }

    /// Five-dimensional volume times 5!, from the difference matrix projected
    /// to the first five coordinates. Uniformly proportional to true volume for
    /// simplices in a fixed hyperplane `sum = const`.
    pub fn volume5(&self) -> BigInt {
        let proj: Vec<Vec<i64>> = self
            .difference_matrix()
            .into_iter()
            .map(|r| r[..5].to_vec())
            .collect();
        int_det_i64(&proj).abs()
    }

    pub fn vertex_set(&self) -> BTreeSet<Point6> {
        self.vertices.iter().copied().collect()
    }

    pub fn same_vertices(&self, other: &LatticeSimplex6) -> bool {
        self.vertex_set() == other.vertex_set()
    }

    pub fn relabeled(&self, sigma: &Perm4, id: impl Into<String>) -> LatticeSimplex6 {
        LatticeSimplex6 {
            id: id.into(),
            vertices: self.vertices.map(|v| sigma.act(&v)),
        }
    }

    /// Barycentric coordinates of `p` (which must lie in the hyperplane of
    /// the simplex for them to sum to one).
    pub fn barycentric(&self, p: &[BigRational]) -> Result<Vec<BigRational>> {
        let w: Vec<Vec<BigRational>> = self
            .vertex_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
            .collect();
        let inv = rational_inverse(&w).ok_or_else(|| Error::DegenerateSimplex(self.id.clone()))?;
        Ok(inv
            .iter()
            .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn cone(&self) -> SimplexCone {
        SimplexCone::new(self)
    }

    pub fn barycenter(&self) -> [BigRational; 6] {
        let six = BigRational::from_integer(6.into());
        std::array::from_fn(|c| {
            let s: i64 = self.vertices.iter().map(|v| v[c]).sum();
            BigRational::from_integer(s.into()) / &six
        })
    }
}

impl fmt::Display for LatticeSimplex6 {
    /// `<id>: v1; v2; ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.id)?;
        for (k, v) in self.vertices.iter().enumerate() {
            let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "{}{}", if k == 0 { " " } else { "; " }, s.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for LatticeSimplex6 {
    type Err = Error;

    /// Inverse of `Display`; the id may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: msg.to_string(),
        };
        let (id, body) = match s.split_once(':') {
            Some((id, body)) => (id.trim(), body),
            None => ("simplex", s),
        };
        let rows: Vec<&str> = body.split(';').map(str::trim).filter(|r| !r.is_empty()).collect();
        if rows.len() != 6 {
            return Err(bad("expected 6 vertices separated by `;`"));
        }
        let mut vertices = [[0i64; 6]; 6];
        for (k, row) in rows.iter().enumerate() {
            let xs: Vec<i64> = row
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| bad("bad coordinate")))
                .collect::<Result<_>>()?;
            if xs.len() != 6 {
                return Err(bad("each vertex needs 6 coordinates"));
            }
            vertices[k].copy_from_slice(&xs);
        }
        LatticeSimplex6::new(id, vertices)
    }
}

/// Integer membership test for the cone over a simplex: `p` is inside iff
/// `sign(det W) * adj(W) p >= 0`.
#[derive(Clone, Debug)]
pub struct SimplexCone {
    rows: [[i128; 6]; 6],
}

impl SimplexCone {
    fn new(s: &LatticeSimplex6) -> Self {
        let w = s.vertex_matrix();
        let det = int_det_i64(&w);
        let wr: Vec<Vec<BigRational>> = w
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let inv = rational_inverse(&wr).expect("nondegenerate simplex");
        let scale = BigRational::from_integer(det.abs());
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let v = &inv[i][j] * &scale;
                assert!(v.is_integer());
                v.to_integer().to_i128().expect("adjugate entry fits")
            })
        });
        SimplexCone { rows }
    }

    /// Barycentric coordinates scaled by `|det W|`.
    pub fn weights(&self, p: &[i128; 6]) -> [i128; 6] {
        self.rows
            .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
    }

    pub fn contains(&self, p: &[i128; 6]) -> bool {
        self.weights(p).iter().all(|&w| w >= 0)
    }

    pub fn contains_strictly(&self, p: &[i128; 6]) -> bool {
        self.weights(p).iter().all(|&w| w > 0)
    }
}

/// An embedded 3-path `path[0] - path[1] - path[2] - path[3]` with white
/// endpoint `path[0]` and black vertex `black in {path[2], path[3]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub path: [usize; 4],
    pub black: usize,
}

impl Decoration {
    pub fn all() -> Vec<Decoration> {
        let mut out = Vec::with_capacity(48);
        for p in Perm4::all() {
            for black in [p.0[2], p.0[3]] {
                out.push(Decoration { path: p.0, black });
            }
        }
        out
    }

    pub fn white(&self) -> usize {
        self.path[0]
    }

    pub fn path_edges(&self) -> [usize; 3] {
        let p = self.path;
        [edge_index(p[0], p[1]), edge_index(p[1], p[2]), edge_index(p[2], p[3])]
    }

    pub fn outer_edges(&self) -> [usize; 2] {
        let p = self.path;
        [edge_index(p[0], p[1]), edge_index(p[2], p[3])]
    }

    fn axis_of(edge: usize) -> usize {
        AXES.iter().position(|a| a.contains(&edge)).unwrap()
    }

    /// Axis holding the outer edges, the middle edge, and the pair disjoint from the path.
    pub fn axes(&self) -> (usize, usize, usize) {
        let p = self.path;
        let outer = Self::axis_of(edge_index(p[0], p[1]));
        let middle = Self::axis_of(edge_index(p[1], p[2]));
        let disjoint = Self::axis_of(edge_index(p[0], p[2]));
        (outer, middle, disjoint)
    }

    /// Six linear forms `l` with `l . p >= 0` on the chamber.
    pub fn inequalities(&self) -> [[i64; 6]; 6] {
        let (outer, middle, disjoint) = self.axes();
        let axis = |k: usize| {
            let mut v = [0i64; 6];
            for e in AXES[k] {
                v[e] = 1;
            }
            v
        };
        let vsum = |k: usize| {
            let mut v = [0i64; 6];
            for e in VERTEX_EDGES[k] {
                v[e] = 1;
            }
            v
        };
        let diff = |a: [i64; 6], b: [i64; 6]| std::array::from_fn(|i| a[i] - b[i]);
        let others: Vec<usize> = (0..4).filter(|&v| v != self.black).collect();
        [
            diff(axis(outer), axis(middle)),
            diff(axis(middle), axis(disjoint)),
            diff(vsum(others[0]), vsum(self.black)),
            diff(vsum(others[1]), vsum(self.black)),
            diff(vsum(others[2]), vsum(self.black)),
            diff(vsum(self.path[1]), vsum(self.white())),
        ]
    }

    /// Irredundant facet system of the chamber cone `X_D`.
    ///
    /// The six sum conditions all vanish on the diagonal, so they only have
    /// rank 5; inside `X` the missing facet is the triangle inequality on the
    /// face spanned by the white vertex, its path neighbour and the black vertex.
    pub fn facet_normals(&self) -> [[i64; 6]; 6] {
        let (outer, middle, disjoint) = self.axes();
        let mut out = [[0i64; 6]; 6];
        for e in AXES[outer] {
            out[0][e] += 1;
        }
        for e in AXES[middle] {
            out[0][e] -= 1;
            out[1][e] += 1;
        }
        for e in AXES[disjoint] {
            out[1][e] -= 1;
        }
        let (w, n, b) = (self.white(), self.path[1], self.black);
        let other = (0..4).find(|&v| v != w && v != n && v != b).unwrap();
        for (row, hi, lo) in [(2, n, w), (3, w, b), (4, other, b)] {
            for e in VERTEX_EDGES[hi] {
                out[row][e] += 1;
            }
            for e in VERTEX_EDGES[lo] {
                out[row][e] -= 1;
            }
        }
        out[5][edge_index(w, b)] = 1;
        out[5][edge_index(n, b)] = 1;
        out[5][edge_index(w, n)] = -1;
        out
    }

    /// Integer-point membership in the closed chamber cone.
    pub fn contains_int(&self, p: &[i128; 6]) -> bool {
        self.facet_normals().iter().all(|l| {
            l.iter()
                .zip(p)
                .map(|(&a, b)| a as i128 * b)
                .sum::<i128>()
                >= 0
        })
    }

    pub fn relabeled(&self, sigma: &Perm4) -> Decoration {
        Decoration {
            path: self.path.map(|v| sigma.0[v]),
            black: sigma.0[self.black],
        }
    }
}

impl fmt::Display for Decoration {
    /// Path listed from the white endpoint, then the black vertex: `1-2-3-4/b3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.path.map(|v| v + 1);
        write!(f, "{}-{}-{}-{}/b{}", p[0], p[1], p[2], p[3], self.black + 1)
    }
}

impl FromStr for Decoration {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownId(s.to_string());
        let (path, black) = s.split_once("/b").ok_or_else(bad)?;
        let verts: Vec<usize> = path
            .split('-')
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let black: usize = black.parse().map_err(|_| bad())?;
        if verts.len() != 4 {
            return Err(bad());
        }
        let d = Decoration {
            path: [verts[0] - 1, verts[1] - 1, verts[2] - 1, verts[3] - 1],
            black: black.wrapping_sub(1),
        };
        if Decoration::all().contains(&d) {
            Ok(d)
        } else {
            Err(bad())
        }
    }
}

/// True iff `p` satisfies all four sum conditions of the decoration.
pub fn chamber_membership(dec: &Decoration, p: &[BigRational]) -> Result<bool> {
    if p.len() != 6 {
        return Err(Error::Arity {
            expected: 6,
            got: p.len(),
        });
    }
    if !in_pseudo_cone(p) {
        return Err(Error::OutsideCone);
    }
    Ok(dec.inequalities().iter().all(|l| {
        let s: BigRational = l
            .iter()
            .zip(p)
            .map(|(&a, x)| BigRational::from_integer(a.into()) * x)
            .sum();
        !s.is_negative()
    }))
}

/// One of the 48 chambers: a simplex of the 48-partition with its decoration.
#[derive(Clone, Debug, Serialize)]
pub struct Chamber {
    pub simplex: LatticeSimplex6,
    #[serde(serialize_with = "ser_display")]
    pub decoration: Decoration,
    /// `(i, j)` of the 12-partition simplex `C_ij` containing this chamber.
    pub parent: (usize, usize),
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Chamber {
    pub fn id(&self) -> &str {
        &self.simplex.id
    }
}

pub struct Partitions {
    pub three: Vec<LatticeSimplex6>,
    pub four: Vec<LatticeSimplex6>,
    pub twelve: Vec<LatticeSimplex6>,
    pub chambers: Vec<Chamber>,
}

fn hull(id: String, verts: Vec<Point6>) -> LatticeSimplex6 {
    let vertices: [Point6; 6] = verts.try_into().expect("six vertices");
    LatticeSimplex6::new(id, vertices).expect("partition simplex")
}

/// `A_k`: hull of the extrema other than `A_k` (one-based).
pub fn a_simplex(k: usize) -> LatticeSimplex6 {
    let mut v: Vec<Point6> = A_EXTREMA
        .iter()
        .enumerate()
        .filter(|(i, _)| i + 1 != k)
        .map(|(_, p)| *p)
        .collect();
    v.extend(B_EXTREMA);
    hull(format!("A_{k}"), v)
}

/// `B_k`: hull of the extrema other than `B_k` (one-based).
pub fn b_simplex(k: usize) -> LatticeSimplex6 {
    let mut v: Vec<Point6> = A_EXTREMA.to_vec();
    v.extend(
        B_EXTREMA
            .iter()
            .enumerate()
            .filter(|(i, _)| i + 1 != k)
            .map(|(_, p)| *p),
    );
    hull(format!("B_{k}"), v)
}

/// `C_ij = A_i ∩ B_j`: hull of `C` and the extrema other than `A_i`, `B_j`.
pub fn c_simplex(i: usize, j: usize) -> LatticeSimplex6 {
    let mut v = vec![CENTER];
    v.extend(
        A_EXTREMA
            .iter()
            .enumerate()
            .filter(|(k, _)| k + 1 != i)
            .map(|(_, p)| *p),
    );
    v.extend(
        B_EXTREMA
            .iter()
            .enumerate()
            .filter(|(k, _)| k + 1 != j)
            .map(|(_, p)| *p),
    );
    hull(format!("C_{i}{j}"), v)
}

/// The four pieces of `C_11`, indexed `(k, l)` in `{1,2}^2`.
pub fn d11_simplex(k: usize, l: usize) -> LatticeSimplex6 {
    let b = if k == 1 { B_EXTREMA[2] } else { B_EXTREMA[3] };
    let a = if l == 1 { A_EXTREMA[1] } else { A_EXTREMA[2] };
    hull(
        format!("D_11{k}{l}"),
        vec![CENTER, B_EXTREMA[1], b_mid(3, 4), a_mid(2, 3), b, a],
    )
}

fn build() -> Partitions {
    let three: Vec<_> = (1..=3).map(a_simplex).collect();
    let four: Vec<_> = (1..=4).map(b_simplex).collect();
    let twelve: Vec<_> = (1..=3)
        .flat_map(|i| (1..=4).map(move |j| c_simplex(i, j)))
        .collect();
    let decorations = Decoration::all();
    let c11 = c_simplex(1, 1);
    let mut chambers = Vec::with_capacity(48);
    for sigma in Perm4::even() {
        let image = c11.relabeled(&sigma, "");
        let (i, j) = (1..=3)
            .flat_map(|i| (1..=4).map(move |j| (i, j)))
            .find(|&(i, j)| c_simplex(i, j).same_vertices(&image))
            .expect("A4 permutes the 12-partition");
        for k in 1..=2 {
            for l in 1..=2 {
                let simplex = d11_simplex(k, l).relabeled(&sigma, format!("D_{i}{j}{k}{l}"));
                let fitting: Vec<&Decoration> = decorations
                    .iter()
                    .filter(|d| {
                        simplex
                            .vertices
                            .iter()
                            .all(|v| d.contains_int(&v.map(|x| x as i128)))
                    })
                    .collect();
                assert_eq!(fitting.len(), 1, "decoration of {}", simplex.id);
                chambers.push(Chamber {
                    simplex,
                    decoration: *fitting[0],
                    parent: (i, j),
                });
            }
        }
    }
    chambers.sort_by(|a, b| a.simplex.id.cmp(&b.simplex.id));
    Partitions {
        three,
        four,
        twelve,
        chambers,
    }
}

pub fn build_partitions() -> &'static Partitions {
    static P: OnceLock<Partitions> = OnceLock::new();
    P.get_or_init(build)
}

impl Partitions {
    /// Looks up a chamber by simplex id (`D_2112`) or decoration (`1-2-3-4/b3`).
    pub fn chamber(&self, id: &str) -> Result<&Chamber> {
        if let Some(c) = self.chambers.iter().find(|c| c.simplex.id == id) {
            return Ok(c);
        }
        let dec: Decoration = id.parse()?;
        self.chambers
            .iter()
            .find(|c| c.decoration == dec)
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Any named simplex of the four partitions.
    pub fn simplex(&self, id: &str) -> Result<&LatticeSimplex6> {
        self.three
            .iter()
            .chain(&self.four)
            .chain(&self.twelve)
            .chain(self.chambers.iter().map(|c| &c.simplex))
            .find(|s| s.id == id)
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Summed scaled volume of each partition, in the order 3, 4, 12, 48.
    pub fn volumes(&self) -> [BigInt; 4] {
        let sum = |v: &mut dyn Iterator<Item = &LatticeSimplex6>| v.map(|s| s.volume5()).sum();
        [
            sum(&mut self.three.iter()),
            sum(&mut self.four.iter()),
            sum(&mut self.twelve.iter()),
            sum(&mut self.chambers.iter().map(|c| &c.simplex)),
        ]
    }
}

/// Chambers making up `X_beta` for the classes where it is defined.
///
/// `None` for the unfriendly classes other than the 3-cycle.
pub fn in_x_beta(beta: EdgeSubset, dec: &Decoration) -> Option<bool> {
    let outer = dec.outer_edges();
    let path = dec.path_edges();
    let outer_disjoint = !outer.iter().any(|&e| beta.contains(e));
    let verts = beta.vertices();
    Some(match beta.class() {
        EdgeClass::FullK4 => true,
        EdgeClass::SingleEdge => {
            let e = beta.edges().next().unwrap();
            let (a, b) = EDGES[e];
            !path.contains(&e) && (dec.black == a || dec.black == b)
        }
        EdgeClass::IncidentPair => {
            let common = (0..4)
                .find(|&v| beta.edges().all(|e| EDGES[e].0 == v || EDGES[e].1 == v))
                .unwrap();
            outer_disjoint && dec.black == common
        }
        EdgeClass::OppositePair => !beta.edges().all(|e| path.contains(&e)),
        EdgeClass::Tripod => {
            let apex = (0..4)
                .find(|&v| beta.edges().all(|e| EDGES[e].0 == v || EDGES[e].1 == v))
                .unwrap();
            dec.black == apex
        }
        EdgeClass::ThreePath => {
            let interior: Vec<usize> = verts
                .iter()
                .copied()
                .filter(|&v| beta.edges().filter(|&e| EDGES[e].0 == v || EDGES[e].1 == v).count() == 2)
                .collect();
            interior.contains(&dec.black) && outer_disjoint
        }
        EdgeClass::FourCycle => outer_disjoint,
        EdgeClass::ThreeCycle => verts.contains(&dec.black),
        EdgeClass::ComplementOfEdge | EdgeClass::ComplementOfIncidentPair => return None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BarycenterCheck {
    pub name: String,
    pub point: String,
    pub holds: bool,
}

fn rat_sum(points: &[Point6]) -> [BigRational; 6] {
    let n = BigRational::from_integer((points.len() as i64).into());
    std::array::from_fn(|c| {
        let s: i64 = points.iter().map(|p| p[c]).sum();
        BigRational::from_integer(s.into()) / &n
    })
}

fn show(p: &[BigRational; 6]) -> String {
    let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

/// Recomputes the boundary identities used in the convexity arguments.
pub fn verify_barycenter_conditions() -> Vec<BarycenterCheck> {
    let [a1, a2, a3] = A_EXTREMA;
    let [b1, b2, b3, b4] = B_EXTREMA;
    let fifth = |v: [i64; 6]| v.map(|x| BigRational::new(x.into(), 5.into()));
    let mut out = Vec::new();

    let p = rat_sum(&[a2, a3, b1, b2, b3]);
    out.push(BarycenterCheck {
        name: "(A2+A3+B1+B2+B3)/5 = (28,22,14,22,14,20)/5, d14+d24=d12".into(),
        point: show(&p),
        holds: p == fifth([28, 22, 14, 22, 14, 20]) && &p[2] + &p[4] == p[0],
    });

    let p = rat_sum(&[a2, a3, b1, b2, CENTER]);
    let vs = vertex_sums(&p);
    out.push(BarycenterCheck {
        name: "(A2+A3+B1+B2+C)/5 = (32,18,18,18,18,16)/5, vertex sum 3 = vertex sum 4".into(),
        point: show(&p),
        holds: p == fifth([32, 18, 18, 18, 18, 16]) && vs[2] == vs[3],
    });

    let from_a = rat_sum(&[a1, a2, a3]);
    let from_b = rat_sum(&[b1, b2, b3, b4]);
    let c = CENTER.map(|x| BigRational::from_integer(x.into()));
    out.push(BarycenterCheck {
        name: "C = (A1+A2+A3)/3 = (B1+B2+B3+B4)/4".into(),
        point: show(&c),
        holds: from_a == c && from_b == c,
    });
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoverageReport {
    pub samples: usize,
    pub seed: u64,
    /// Points outside every simplex of the named partition.
    pub uncovered: [usize; 4],
    /// Points with no sum ties that hit more than one simplex.
    pub overlapping_generic: [usize; 4],
    pub points_with_ties: usize,
    /// Chamber count disagreeing with decoration membership.
    pub chamber_mismatches: usize,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.uncovered.iter().all(|&x| x == 0)
            && self.overlapping_generic.iter().all(|&x| x == 0)
            && self.chamber_mismatches == 0
    }
}

fn has_ties(p: &[i128; 6]) -> bool {
    let v = vertex_sums(p);
    let a = axis_sums(p);
    let distinct = |s: &[i128]| s.iter().collect::<BTreeSet<_>>().len() == s.len();
    !(distinct(&v) && distinct(&a))
}

/// Samples exact points of `X24` (as integer rays) and checks that every
/// partition covers them, with exactly one simplex for tie-free points.
pub fn coverage_check(samples: usize, seed: u64) -> CoverageReport {
    let parts = build_partitions();
    let cones: Vec<Vec<SimplexCone>> = vec![
        parts.three.iter().map(LatticeSimplex6::cone).collect(),
        parts.four.iter().map(LatticeSimplex6::cone).collect(),
        parts.twelve.iter().map(LatticeSimplex6::cone).collect(),
        parts.chambers.iter().map(|c| c.simplex.cone()).collect(),
    ];
    let ext: Vec<Point6> = A_EXTREMA.iter().chain(B_EXTREMA.iter()).copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoverageReport {
        samples,
        seed,
        ..Default::default()
    };
    for _ in 0..samples {
        let w: Vec<i128> = (0..7).map(|_| rng.gen_range(0..1_000_000i128)).collect();
        let p: [i128; 6] =
            std::array::from_fn(|c| ext.iter().zip(&w).map(|(e, wi)| e[c] as i128 * wi).sum());
        if p.iter().all(|&x| x == 0) {
            continue;
        }
        let ties = has_ties(&p);
        report.points_with_ties += ties as usize;
        for (k, part) in cones.iter().enumerate() {
            let hits = part.iter().filter(|c| c.contains(&p)).count();
            if hits == 0 {
                report.uncovered[k] += 1;
            }
            if hits > 1 && !ties {
                report.overlapping_generic[k] += 1;
            }
        }
        let dec_hits: Vec<usize> = parts
            .chambers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.decoration.contains_int(&p))
            .map(|(i, _)| i)
            .collect();
        let simplex_hits: Vec<usize> = cones[3]
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&p))
            .map(|(i, _)| i)
            .collect();
        if dec_hits != simplex_hits {
            report.chamber_mismatches += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: &Point6) -> Vec<BigRational> {
        p.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn extrema_match_the_published_list() {
        let e = extrema();
        assert_eq!(e.len(), 7);
        assert_eq!(e[0].coords, [0, 6, 6, 6, 6, 0]);
        assert_eq!(e[6].coords, [0, 0, 8, 0, 8, 8]);
        for p in &e {
            assert_eq!(p.coords.iter().sum::<i64>(), 24, "{}", p.label);
            assert!(in_pseudo_cone(&p.coords));
        }
        assert_eq!(a_mid(2, 3), [6, 3, 3, 3, 3, 6]);
        assert_eq!(a_mid(1, 3), [3, 6, 3, 3, 6, 3]);
        assert_eq!(b_mid(3, 4), [0, 4, 4, 4, 4, 8]);
    }

    #[test]
    fn sums_examples() {
        assert_eq!(vertex_sums(&CENTER), [12; 4]);
        for b in B_EXTREMA {
            let s = axis_sums(&b);
            assert!(s.iter().all(|&x| x == s[0]));
        }
        for a in [A_EXTREMA[1], A_EXTREMA[2]] {
            let s = axis_sums(&a);
            assert!(s[0] >= s[1] && s[0] >= s[2]);
        }
    }

    #[test]
    fn relabel_examples() {
        assert_eq!(relabel_action(&Perm4::IDENTITY), [0, 1, 2, 3, 4, 5]);
        let swap12 = Perm4([1, 0, 2, 3]);
        let perm = relabel_action(&swap12);
        assert_eq!(perm[0], 0);
        assert_eq!(perm[5], 5);
        let c11 = c_simplex(1, 1);
        let orbit: BTreeSet<BTreeSet<Point6>> = Perm4::even()
            .iter()
            .map(|s| c11.relabeled(s, "").vertex_set())
            .collect();
        assert_eq!(orbit.len(), 12);
        assert_eq!(Perm4::all().len(), 24);
        assert_eq!(Perm4::even().len(), 12);
    }

    #[test]
    fn vertex_sums_follow_relabeling() {
        let p = [1i64, 2, 3, 4, 5, 6];
        for s in Perm4::all() {
            let q = s.act(&p);
            let (vp, vq) = (vertex_sums(&p), vertex_sums(&q));
            for v in 0..4 {
                assert_eq!(vq[s.0[v]], vp[v]);
            }
        }
    }

    #[test]
    fn simplex_text_round_trip() {
        for ch in build_partitions().chambers.iter().step_by(5) {
            let back: LatticeSimplex6 = ch.simplex.to_string().parse().unwrap();
            assert_eq!(back, ch.simplex);
        }
        let anon: LatticeSimplex6 = "4 4 4 4 4 4; 0,8,0,8,0,8; 8,0,0,8,8,0; 0,0,8,0,8,8; 0,6,6,6,6,0; 6,6,0,0,6,6"
            .parse()
            .unwrap();
        assert!(anon.same_vertices(&c_simplex(2, 1)));
        assert_eq!(anon.id, "simplex");
        assert!("x: 1,2,3".parse::<LatticeSimplex6>().is_err());
    }

    #[test]
    fn published_simplices_appear() {
        let c21 = c_simplex(2, 1);
        let listed = [
            [4, 4, 4, 4, 4, 4],
            [0, 8, 0, 8, 0, 8],
            [8, 0, 0, 8, 8, 0],
            [0, 0, 8, 0, 8, 8],
            [0, 6, 6, 6, 6, 0],
            [6, 6, 0, 0, 6, 6],
        ];
        assert_eq!(c21.vertex_set(), listed.iter().copied().collect());
        let b1 = b_simplex(1);
        assert_eq!(
            b1.vertices,
            [
                [0, 6, 6, 6, 6, 0],
                [6, 0, 6, 6, 0, 6],
                [6, 6, 0, 0, 6, 6],
                [8, 0, 0, 8, 8, 0],
                [0, 8, 0, 8, 0, 8],
                [0, 0, 8, 0, 8, 8]
            ]
        );
        assert_eq!(build_partitions().chambers.len(), 48);
    }

    #[test]
    fn partition_volumes_add_up() {
        let v = build_partitions().volumes();
        assert!(v[0] > BigInt::zero());
        assert!(v.iter().all(|x| *x == v[0]), "{v:?}");
    }

    #[test]
    fn decorations_and_chambers() {
        let decs = Decoration::all();
        assert_eq!(decs.len(), 48);
        assert_eq!(decs.iter().collect::<BTreeSet<_>>().len(), 48);
        for d in &decs {
            let rows: Vec<Vec<i64>> = d.inequalities().iter().map(|r| r.to_vec()).collect();
            assert_eq!(rank_i64(&rows), 5);
            let rows: Vec<Vec<i64>> = d.facet_normals().iter().map(|r| r.to_vec()).collect();
            assert_eq!(rank_i64(&rows), 6);
            assert_eq!(d.to_string().parse::<Decoration>().unwrap(), *d);
        }
        let parts = build_partitions();
        let used: BTreeSet<Decoration> = parts.chambers.iter().map(|c| c.decoration).collect();
        assert_eq!(used.len(), 48);
        let c = rat(&CENTER);
        for d in &decs {
            assert!(chamber_membership(d, &c).unwrap());
        }
        assert!(chamber_membership(&decs[0], &rat(&[9, 1, 1, 1, 1, 1])).is_err());
    }

    #[test]
    fn decoration_transport_is_equivariant() {
        let parts = build_partitions();
        for sigma in Perm4::all() {
            for ch in &parts.chambers {
                let img = ch.simplex.relabeled(&sigma, "");
                let target = parts
                    .chambers
                    .iter()
                    .find(|c| c.simplex.same_vertices(&img))
                    .expect("S4 permutes the chambers");
                assert_eq!(target.decoration, ch.decoration.relabeled(&sigma));
            }
        }
    }

    #[test]
    fn interior_point_in_exactly_one_chamber() {
        let parts = build_partitions();
        for ch in parts.chambers.iter().step_by(5) {
            // Weights 1..6 keep the point strictly inside the simplex.
            let p: Vec<BigRational> = (0..6)
                .map(|c| {
                    let s: i64 = ch.simplex.vertices.iter().enumerate().map(|(k, v)| (k as i64 + 1) * v[c]).sum();
                    BigRational::new(s.into(), 21.into())
                })
                .collect();
            let hits = Decoration::all()
                .iter()
                .filter(|d| chamber_membership(d, &p).unwrap())
                .count();
            assert_eq!(hits, 1, "{}", ch.simplex.id);
        }
    }

    #[test]
    fn each_chamber_refines_one_c_simplex() {
        let parts = build_partitions();
        for ch in &parts.chambers {
            let containing: Vec<&LatticeSimplex6> = parts
                .twelve
                .iter()
                .filter(|c| {
                    let cone = c.cone();
                    ch.simplex.vertices.iter().all(|v| cone.contains(&v.map(|x| x as i128)))
                })
                .collect();
            assert_eq!(containing.len(), 1);
            let (i, j) = ch.parent;
            assert_eq!(containing[0].id, format!("C_{i}{j}"));
            // C_ij: axis i largest and vertex j smallest.
            for v in &ch.simplex.vertices {
                let a = axis_sums(v);
                let s = vertex_sums(v);
                assert!(a.iter().all(|&x| x <= a[i - 1]));
                assert!(s.iter().all(|&x| x >= s[j - 1]));
            }
        }
    }

    fn primitive(v: &[i128]) -> Vec<i128> {
        let g = v.iter().fold(0i128, |a, &b| num_integer::gcd(a, b));
        v.iter().map(|x| x / g).collect()
    }

    #[test]
    fn facet_normals_are_the_simplex_facets() {
        for ch in &build_partitions().chambers {
            let cone = ch.simplex.cone();
            let from_simplex: BTreeSet<Vec<i128>> = (0..6)
                .map(|i| {
                    let row: Vec<i128> = (0..6)
                        .map(|c| {
                            let mut e = [0i128; 6];
                            e[c] = 1;
                            cone.weights(&e)[i]
                        })
                        .collect();
                    primitive(&row)
                })
                .collect();
            let from_decoration: BTreeSet<Vec<i128>> = ch
                .decoration
                .facet_normals()
                .iter()
                .map(|r| primitive(&r.map(|x| x as i128)))
                .collect();
            assert_eq!(from_simplex, from_decoration, "{}", ch.simplex.id);
        }
    }

    #[test]
    fn barycenter_identities() {
        for check in verify_barycenter_conditions() {
            assert!(check.holds, "{}", check.name);
        }
    }

    #[test]
    fn small_coverage_sample() {
        let r = coverage_check(300, 7);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn x_beta_counts() {
        let cases = [
            ("12", 12),
            ("12,13", 4),
            ("12,34", 32),
            ("12,13,14", 12),
            ("12,14,23", 8),
            ("12,13,24,34", 16),
            ("12,13,23", 36),
            ("K4", 48),
        ];
        for (b, n) in cases {
            let beta: EdgeSubset = b.parse().unwrap();
            let count = Decoration::all()
                .iter()
                .filter(|d| in_x_beta(beta, d).unwrap())
                .count();
            assert_eq!(count, n, "{b}");
        }
        assert!(in_x_beta("12,13,14,23,24".parse().unwrap(), &Decoration::all()[0]).is_none());
    }

    #[test]
    fn barycentric_round_trip() {
        let s = c_simplex(1, 1);
        let w = s.barycentric(&s.barycenter()).unwrap();
        let sixth = BigRational::new(1.into(), 6.into());
        assert!(w.iter().all(|x| *x == sixth));
    }
}
