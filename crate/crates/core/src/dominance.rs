//! The method of positive dominance on the unit 5-cube.
//!
//! A polynomial is weak positive dominant (WPD) when every box partial sum of
//! its coefficients is nonnegative; WPD polynomials are nonnegative on the
//! cube. The certifier halves the cube along the axis picked by a marker until
//! every piece is WPD, or until a piece is negative at its origin corner.

use std::cell::RefCell;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Exponents, Polynomial};

pub const DIM: usize = 5;
/// Per-variable degree cap handled by the dense engine.
pub const MAX_DEGREE: usize = 6;
const SIDE: usize = MAX_DEGREE + 1;
const SIZE: usize = SIDE * SIDE * SIDE * SIDE * SIDE;
const STRIDE: [usize; DIM] = [1, SIDE, SIDE * SIDE, SIDE * SIDE * SIDE, SIDE * SIDE * SIDE * SIDE];

/// Per-coordinate subdivision depths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Marker(pub [u32; DIM]);

impl Marker {
    /// First minimal entry, scanning left to right.
    pub fn youngest(&self) -> usize {
        let min = *self.0.iter().min().unwrap();
        self.0.iter().position(|&x| x == min).unwrap()
    }

    pub fn successor(&self) -> Marker {
        let mut m = *self;
        m.0[self.youngest()] += 1;
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// One halving: which axis, and which half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Split {
    pub axis: u8,
    pub side: Side,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
        };
        write!(f, "{}{}", s, self.axis + 1)
    }
}

pub fn lineage_string(lineage: &[Split]) -> String {
    lineage
        .iter()
        .map(Split::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_lineage(text: &str) -> Result<Vec<Split>> {
    text.split_whitespace()
        .map(|tok| {
            let bad = || Error::Parse {
                line: 1,
                msg: format!("bad split `{tok}`"),
            };
            let side = match tok.chars().next() {
                Some('L') => Side::Left,
                Some('R') => Side::Right,
                _ => return Err(bad()),
            };
            let axis: usize = tok[1..].parse().map_err(|_| bad())?;
            if !(1..=DIM).contains(&axis) {
                return Err(bad());
            }
            Ok(Split {
                axis: (axis - 1) as u8,
                side,
            })
        })
        .collect()
}

/// Machine integers are used while every coefficient has at most this many
/// bits; one subdivision or one WPD pass then stays below `2^115`.
const SMALL_BITS: u32 = 100;

trait Coeff: Clone + Default {
    fn nil(&self) -> bool;
    fn negative(&self) -> bool;
    fn add_from(&mut self, other: &Self);
    fn add_scaled(&mut self, other: &Self, k: i64);
    fn neg_in_place(&mut self);
    fn shl_in_place(&mut self, bits: usize);
}

impl Coeff for i128 {
    fn nil(&self) -> bool {
        *self == 0
    }
    fn negative(&self) -> bool {
        *self < 0
    }
    fn add_from(&mut self, other: &Self) {
        *self += *other;
    }
    fn add_scaled(&mut self, other: &Self, k: i64) {
        *self += *other * k as i128;
    }
    fn neg_in_place(&mut self) {
        *self = -*self;
    }
    fn shl_in_place(&mut self, bits: usize) {
        *self <<= bits;
    }
}

impl Coeff for BigInt {
    fn nil(&self) -> bool {
        self.is_zero()
    }
    fn negative(&self) -> bool {
        self.is_negative()
    }
    fn add_from(&mut self, other: &Self) {
        *self += other;
    }
    fn add_scaled(&mut self, other: &Self, k: i64) {
        if k == 1 {
            *self += other;
        } else {
            *self += other * k;
        }
    }
    fn neg_in_place(&mut self) {
        *self = -std::mem::take(self);
    }
    fn shl_in_place(&mut self, bits: usize) {
        *self <<= bits;
    }
}

fn wpd_in_place<T: Coeff>(a: &mut [T], degree: &[usize; DIM]) -> bool {
    for axis in 0..DIM {
        let s = STRIDE[axis];
        for e in box_indices(degree) {
            if e[axis] == 0 {
                continue;
            }
            let i = index(&e);
            let (lo, hi) = a.split_at_mut(i);
            if !lo[i - s].nil() {
                hi[0].add_from(&lo[i - s]);
            }
        }
    }
    box_indices(degree).all(|e| !a[index(&e)].negative())
}

fn dilate_in_place<T: Coeff>(a: &mut [T], degree: &[usize; DIM], axis: usize) {
    let d = degree[axis];
    for e in box_indices(degree) {
        let shift = d - e[axis];
        if shift > 0 {
            let c = &mut a[index(&e)];
            if !c.nil() {
                c.shl_in_place(shift);
            }
        }
    }
}

fn reflect_in_place<T: Coeff>(a: &mut [T], degree: &[usize; DIM], axis: usize) {
    let binom = binomials();
    let d = degree[axis];
    let s = STRIDE[axis];
    let mut fiber = *degree;
    fiber[axis] = 0;
    let mut old: Vec<T> = vec![T::default(); d + 1];
    for base in box_indices(&fiber) {
        let b = index(&base);
        for m in 0..=d {
            old[m] = std::mem::take(&mut a[b + m * s]);
        }
        // (1 - x)^m = sum_k C(m,k) (-1)^k x^k
        for k in 0..=d {
            let mut acc = T::default();
            for m in k..=d {
                if !old[m].nil() {
                    acc.add_scaled(&old[m], binom[m][k]);
                }
            }
            if k % 2 == 1 {
                acc.neg_in_place();
            }
            a[b + k * s] = acc;
        }
    }
}

#[derive(Clone, Debug)]
enum Store {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// Dense coefficient array over `{0..6}^5`, plus the fixed per-axis degree.
///
/// The degree in each variable is invariant under dilation and reflection.
#[derive(Clone, Debug)]
pub struct CubePoly {
    store: Store,
    degree: [usize; DIM],
}

fn index(e: &[usize; DIM]) -> usize {
    e.iter().zip(STRIDE).map(|(a, s)| a * s).sum()
}

/// All multi-indices in the box `0..=degree`.
fn box_indices(degree: &[usize; DIM]) -> impl Iterator<Item = [usize; DIM]> + '_ {
    let total: usize = degree.iter().map(|d| d + 1).product();
    (0..total).map(move |mut n| {
        let mut e = [0; DIM];
        for (k, d) in degree.iter().enumerate() {
            e[k] = n % (d + 1);
            n /= d + 1;
        }
        e
    })
}

fn binomials() -> [[i64; SIDE]; SIDE] {
    let mut c = [[0i64; SIDE]; SIDE];
    for n in 0..SIDE {
        c[n][0] = 1;
        for k in 1..=n {
            c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
    }
    c
}

fn small_fits(v: &i128) -> bool {
    128 - v.unsigned_abs().leading_zeros() <= SMALL_BITS
}

impl CubePoly {
    pub fn from_polynomial(p: &Polynomial) -> Result<CubePoly> {
        if p.nvars() != DIM {
            return Err(Error::Arity {
                expected: DIM,
                got: p.nvars(),
            });
        }
        p.check_degree_cap(MAX_DEGREE as u32)?;
        let mut coeffs = vec![BigInt::zero(); SIZE];
        let mut degree = [0; DIM];
        for (e, c) in p.terms() {
            let mut idx = [0; DIM];
            for k in 0..DIM {
                idx[k] = e.get(k) as usize;
                degree[k] = degree[k].max(idx[k]);
            }
            coeffs[index(&idx)] = c.clone();
        }
        let mut out = CubePoly {
            store: Store::Big(coeffs),
            degree,
        };
        out.demote();
        Ok(out)
    }

    fn big_coeffs(&self) -> Vec<BigInt> {
        match &self.store {
            Store::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Store::Big(v) => v.clone(),
        }
    }

    /// Switches to machine integers when every coefficient is small.
    fn demote(&mut self) {
        if let Store::Big(v) = &self.store {
            if v.iter().all(|c| c.bits() <= SMALL_BITS as u64) {
                let small = v.iter().map(|c| c.to_i128().unwrap()).collect();
                self.store = Store::Small(small);
            }
        }
    }

    fn promote_if_large(&mut self) {
        if let Store::Small(v) = &self.store {
            if !v.iter().all(small_fits) {
                self.store = Store::Big(v.iter().map(|&x| BigInt::from(x)).collect());
            }
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let coeffs = self.big_coeffs();
        let mut p = Polynomial::zero(DIM);
        for e in box_indices(&self.degree) {
            let c = &coeffs[index(&e)];
            if !c.is_zero() {
                let mut ex = [0u8; 6];
                for k in 0..DIM {
                    ex[k] = e[k] as u8;
                }
                p.add_term(Exponents(ex), c.clone());
            }
        }
        p
    }

    pub fn degree(&self) -> [usize; DIM] {
        self.degree
    }

    pub fn constant_term(&self) -> BigInt {
        match &self.store {
            Store::Small(v) => BigInt::from(v[0]),
            Store::Big(v) => v[0].clone(),
        }
    }

    pub fn negative_at_origin(&self) -> bool {
        match &self.store {
            Store::Small(v) => v[0] < 0,
            Store::Big(v) => v[0].is_negative(),
        }
    }

    /// Box partial sums by cumulative sums along each axis in turn.
    pub fn is_wpd(&self) -> bool {
        thread_local! {
            static SCRATCH: RefCell<Vec<BigInt>> = const { RefCell::new(Vec::new()) };
        }
        match &self.store {
            Store::Small(v) => wpd_in_place(&mut v.clone(), &self.degree),
            Store::Big(v) => SCRATCH.with(|cell| {
                let mut a = cell.borrow_mut();
                a.clone_from(v);
                wpd_in_place(&mut a, &self.degree)
            }),
        }
    }

    /// `2^E p(.., x_axis / 2, ..)` with `E` the degree in that axis.
    pub fn dilate(&mut self, axis: usize) {
        match &mut self.store {
            Store::Small(v) => dilate_in_place(v, &self.degree, axis),
            Store::Big(v) => dilate_in_place(v, &self.degree, axis),
        }
        self.promote_if_large();
    }

    /// `p(.., 1 - x_axis, ..)`.
    pub fn reflect(&mut self, axis: usize) {
        match &mut self.store {
            Store::Small(v) => reflect_in_place(v, &self.degree, axis),
            Store::Big(v) => reflect_in_place(v, &self.degree, axis),
        }
        self.promote_if_large();
    }

    /// The left and right halves along `axis`, each rescaled to the unit cube.
    pub fn split(&self, axis: usize) -> (CubePoly, CubePoly) {
        self.clone().into_split(axis)
    }

    pub fn into_split(self, axis: usize) -> (CubePoly, CubePoly) {
        let mut right = self.clone();
        right.reflect(axis);
        right.dilate(axis);
        let mut left = self;
        left.dilate(axis);
        (left, right)
    }

    pub fn apply(&self, split: Split) -> CubePoly {
        let mut out = self.clone();
        let axis = split.axis as usize;
        if split.side == Side::Right {
            out.reflect(axis);
        }
        out.dilate(axis);
        out
    }
}

impl PartialEq for CubePoly {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.big_coeffs() == other.big_coeffs()
    }
}

/// Sparse WPD test.
pub fn is_wpd(p: &Polynomial) -> bool {
    let env = p.envelope();
    let n = p.nvars();
    let dims: Vec<usize> = (0..n).map(|k| env.get(k) as usize + 1).collect();
    let total: usize = dims.iter().product();
    let mut a = vec![BigInt::zero(); total];
    let strides: Vec<usize> = dims
        .iter()
        .scan(1, |acc, &d| {
            let s = *acc;
            *acc *= d;
            Some(s)
        })
        .collect();
    for (e, c) in p.terms() {
        let i: usize = (0..n).map(|k| e.get(k) as usize * strides[k]).sum();
        a[i] = c.clone();
    }
    for k in 0..n {
        for i in 0..total {
            if (i / strides[k]) % dims[k] != 0 {
                let prev = a[i - strides[k]].clone();
                a[i] += prev;
            }
        }
    }
    a.iter().all(|x| !x.is_negative())
}

/// Variable `i` becomes variable `i + k` (cyclically).
pub fn rotate(p: &Polynomial, k: usize) -> Polynomial {
    let n = p.nvars();
    let perm: Vec<usize> = (0..n).map(|i| (i + k) % n).collect();
    p.permute_vars(&perm)
}

/// `2^E p(x_1 / 2, x_2, ...)` with `E` the degree in `x_1`.
pub fn dilate_first(p: &Polynomial) -> Polynomial {
    let e = p.degree_in(0);
    let mut out = Polynomial::zero(p.nvars());
    for (ex, c) in p.terms() {
        out.add_term(*ex, c << (e - ex.get(0) as u32));
    }
    out
}

/// `p(1 - x_1, x_2, ...)`.
pub fn reflect_first(p: &Polynomial) -> Polynomial {
    let binom = binomials();
    let mut out = Polynomial::zero(p.nvars());
    for (ex, c) in p.terms() {
        let m = ex.get(0) as usize;
        for k in 0..=m {
            let mut e = *ex;
            e.0[0] = k as u8;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.add_term(e, c * (sign * binom[m][k]));
        }
    }
    out
}

pub fn negative_at_origin(p: &Polynomial) -> bool {
    p.constant_term().is_negative()
}

#[derive(Clone, Debug)]
pub struct MarkedBox {
    pub poly: CubePoly,
    pub marker: Marker,
    pub lineage: Vec<Split>,
}

impl MarkedBox {
    pub fn root(poly: CubePoly) -> Self {
        MarkedBox {
            poly,
            marker: Marker::default(),
            lineage: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.lineage.len()
    }
}

/// Halves along the marker's youngest axis; both children get the successor marker.
pub fn subdivide(b: &MarkedBox) -> (MarkedBox, MarkedBox) {
    subdivide_owned(b.clone())
}

pub fn subdivide_owned(b: MarkedBox) -> (MarkedBox, MarkedBox) {
    let axis = b.marker.youngest();
    let marker = b.marker.successor();
    let (l, r) = b.poly.into_split(axis);
    let mut left_lineage = b.lineage;
    let mut right_lineage = left_lineage.clone();
    left_lineage.push(Split {
        axis: axis as u8,
        side: Side::Left,
    });
    right_lineage.push(Split {
        axis: axis as u8,
        side: Side::Right,
    });
    (
        MarkedBox {
            poly: l,
            marker,
            lineage: left_lineage,
        },
        MarkedBox {
            poly: r,
            marker,
            lineage: right_lineage,
        },
    )
}

/// The cube point (in root coordinates) that is the origin of the box.
pub fn corner_of(lineage: &[Split]) -> [BigRational; DIM] {
    let mut origin: [BigRational; DIM] = std::array::from_fn(|_| BigRational::zero());
    let mut dir: [BigRational; DIM] = std::array::from_fn(|_| BigRational::one());
    let two = BigRational::from_integer(2.into());
    for s in lineage {
        let k = s.axis as usize;
        match s.side {
            Side::Left => dir[k] = &dir[k] / &two,
            Side::Right => {
                origin[k] = &origin[k] + &dir[k];
                dir[k] = -&dir[k] / &two;
            }
        }
    }
    origin
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Nonnegative,
    NegativeWitness,
    BudgetExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Nonnegative => "nonnegative",
            Status::NegativeWitness => "negative-witness",
            Status::BudgetExhausted => "budget-exhausted",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeWitness {
    #[serde(serialize_with = "ser_lineage")]
    pub lineage: Vec<Split>,
    /// Cube corner in root coordinates.
    #[serde(serialize_with = "ser_rationals")]
    pub corner: [BigRational; DIM],
    /// Constant term of the box polynomial (a positive multiple of the value).
    #[serde(serialize_with = "ser_bigint")]
    pub box_value: BigInt,
    /// Exact value of the input polynomial at the corner.
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

fn ser_lineage<S: serde::Serializer>(l: &[Split], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&lineage_string(l))
}

fn ser_rationals<S: serde::Serializer>(
    v: &[BigRational; DIM],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(DIM))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub status: Status,
    /// Pop-and-test iterations.
    pub steps: u64,
    pub wpd_tests: u64,
    pub subdivisions: u64,
    pub max_depth: usize,
    /// Subdivisions per axis.
    pub histogram: [u64; DIM],
    pub witness: Option<NegativeWitness>,
    /// Lineages of the WPD leaves, when requested.
    #[serde(skip)]
    pub leaves: Option<Vec<Vec<Split>>>,
    /// Whether step counts are comparable (sequential mode only).
    pub sequential: bool,
}

impl Certificate {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Nonnegative => 0,
            Status::NegativeWitness => 1,
            Status::BudgetExhausted => 2,
        }
    }

    /// Multi-line text report.
    pub fn report(&self) -> String {
        let mut s = format!(
            "status: {}\nsteps: {}\nwpd-tests: {}\nsubdivisions: {}\nmax-depth: {}\nhistogram: {:?}\n",
            self.status, self.steps, self.wpd_tests, self.subdivisions, self.max_depth, self.histogram
        );
        if !self.sequential {
            s.push_str("mode: parallel (step count not comparable)\n");
        }
        if let Some(w) = &self.witness {
            let corner: Vec<String> = w.corner.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!(
                "lineage: {}\ncorner: ({})\nvalue: {}\n",
                lineage_string(&w.lineage),
                corner.join(", "),
                w.value
            ));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PushOrder {
    /// Push left then right, so the right half is processed first.
    #[default]
    LeftThenRight,
    RightThenLeft,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub budget: u64,
    pub push_order: PushOrder,
    pub record_leaves: bool,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: DEFAULT_BUDGET,
            push_order: PushOrder::LeftThenRight,
            record_leaves: false,
        }
    }
}

fn make_witness(root: &Polynomial, b: &MarkedBox) -> NegativeWitness {
    let corner = corner_of(&b.lineage);
    let value = root
        .evaluate_rational(&corner)
        .expect("five-variable root polynomial");
    NegativeWitness {
        lineage: b.lineage.clone(),
        corner,
        box_value: b.poly.constant_term(),
        value,
    }
}

/// Sequential LIFO certifier.
pub fn certify(p: &Polynomial, budget: u64) -> Result<Certificate> {
    certify_with(
        p,
        &CertifyOptions {
            budget,
            ..Default::default()
        },
    )
}

pub fn certify_with(p: &Polynomial, opts: &CertifyOptions) -> Result<Certificate> {
    let mut cert = Certificate {
        status: Status::Nonnegative,
        steps: 0,
        wpd_tests: 0,
        subdivisions: 0,
        max_depth: 0,
        histogram: [0; DIM],
        witness: None,
        leaves: opts.record_leaves.then(Vec::new),
        sequential: true,
    };
    let mut list = vec![MarkedBox::root(CubePoly::from_polynomial(p)?)];
    while let Some(b) = list.pop() {
        if cert.steps >= opts.budget {
            cert.status = Status::BudgetExhausted;
            return Ok(cert);
        }
        cert.steps += 1;
        cert.max_depth = cert.max_depth.max(b.depth());
        if b.poly.negative_at_origin() {
            cert.status = Status::NegativeWitness;
            cert.witness = Some(make_witness(p, &b));
            return Ok(cert);
        }
        cert.wpd_tests += 1;
        if b.poly.is_wpd() {
            if let Some(leaves) = cert.leaves.as_mut() {
                leaves.push(b.lineage);
            }
            continue;
        }
        cert.subdivisions += 1;
        cert.histogram[b.marker.youngest()] += 1;
        let (l, r) = subdivide_owned(b);
        match opts.push_order {
            PushOrder::LeftThenRight => {
                list.push(l);
                list.push(r);
            }
            PushOrder::RightThenLeft => {
                list.push(r);
                list.push(l);
            }
        }
    }
    Ok(cert)
}

struct Shared<'a> {
    root: &'a Polynomial,
    budget: u64,
    halt: AtomicBool,
    steps: AtomicU64,
    wpd_tests: AtomicU64,
    subdivisions: AtomicU64,
    max_depth: AtomicU64,
    histogram: [AtomicU64; DIM],
    outcome: Mutex<Option<(Status, Option<NegativeWitness>)>>,
}

impl Shared<'_> {
    fn stop(&self, status: Status, witness: Option<NegativeWitness>) {
        let mut o = self.outcome.lock().unwrap();
        if o.is_none() {
            *o = Some((status, witness));
        }
        self.halt.store(true, Ordering::SeqCst);
    }

    fn run(&self, b: MarkedBox) {
        if self.halt.load(Ordering::Relaxed) {
            return;
        }
        if self.steps.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.stop(Status::BudgetExhausted, None);
            return;
        }
        self.max_depth.fetch_max(b.depth() as u64, Ordering::Relaxed);
        if b.poly.negative_at_origin() {
            self.stop(Status::NegativeWitness, Some(make_witness(self.root, &b)));
            return;
        }
        self.wpd_tests.fetch_add(1, Ordering::Relaxed);
        if b.poly.is_wpd() {
            return;
        }
        let axis = b.marker.youngest();
        let (l, r) = subdivide_owned(b);
        self.subdivisions.fetch_add(1, Ordering::Relaxed);
        self.histogram[axis].fetch_add(1, Ordering::Relaxed);
        rayon::join(|| self.run(l), || self.run(r));
    }
}

/// Work-stealing certifier. The status agrees with [`certify`]; the step
/// count and, when several exist, the witness may differ.
pub fn certify_parallel(p: &Polynomial, budget: u64) -> Result<Certificate> {
    let root = MarkedBox::root(CubePoly::from_polynomial(p)?);
    let shared = Shared {
        root: p,
        budget,
        halt: AtomicBool::new(false),
        steps: AtomicU64::new(0),
        wpd_tests: AtomicU64::new(0),
        subdivisions: AtomicU64::new(0),
        max_depth: AtomicU64::new(0),
        histogram: std::array::from_fn(|_| AtomicU64::new(0)),
        outcome: Mutex::new(None),
    };
    shared.run(root);
    let (status, witness) = shared
        .outcome
        .into_inner()
        .unwrap()
        .unwrap_or((Status::Nonnegative, None));
    Ok(Certificate {
        status,
        steps: shared.steps.into_inner().min(budget),
        wpd_tests: shared.wpd_tests.into_inner(),
        subdivisions: shared.subdivisions.into_inner(),
        max_depth: shared.max_depth.into_inner() as usize,
        histogram: shared.histogram.map(AtomicU64::into_inner),
        witness,
        leaves: None,
        sequential: false,
    })
}

/// Re-derives every recorded leaf from the root and checks it is WPD and
/// that the leaves tile the cube (their volumes sum to one).
pub fn replay(p: &Polynomial, leaves: &[Vec<Split>]) -> Result<bool> {
    let root = CubePoly::from_polynomial(p)?;
    let mut volume = BigRational::zero();
    for lineage in leaves {
        let mut q = root.clone();
        for s in lineage {
            q = q.apply(*s);
        }
        if !q.is_wpd() {
            return Ok(false);
        }
        volume += BigRational::new(BigInt::one(), BigInt::one() << lineage.len());
    }
    Ok(volume == BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quad() -> Polynomial {
        Polynomial::parse("3 0 0 0 0 0\n-4 1 0 0 0 0\n2 2 0 0 0 0", Some(5)).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn wpd_examples() {
        assert!(is_wpd(&Polynomial::constant(5, 5)));
        assert!(!is_wpd(&quad()));
        let cleared =
            Polynomial::parse("6 0 0 0 0 0\n-4 1 0 0 0 0\n1 2 0 0 0 0", Some(5)).unwrap();
        assert!(is_wpd(&cleared));
        assert!(!CubePoly::from_polynomial(&quad()).unwrap().is_wpd());
        assert!(CubePoly::from_polynomial(&cleared).unwrap().is_wpd());
    }

    #[test]
    fn operator_examples() {
        let x1 = Polynomial::var(5, 0);
        assert_eq!(rotate(&x1, 1), Polynomial::var(5, 1));
        assert_eq!(rotate(&quad(), 5), quad());
        assert_eq!(rotate(&rotate(&quad(), 2), 3), quad());
        assert_eq!(dilate_first(&x1), x1);
        let p = Polynomial::parse("1 2 0 0 0 0\n1 0 0 0 0 0", Some(5)).unwrap();
        let want = Polynomial::parse("1 2 0 0 0 0\n4 0 0 0 0 0", Some(5)).unwrap();
        assert_eq!(dilate_first(&p), want);
        assert_eq!(
            reflect_first(&x1),
            &Polynomial::one(5) - &x1
        );
        let want = Polynomial::parse("1 0 0 0 0 0\n2 2 0 0 0 0", Some(5)).unwrap();
        assert_eq!(reflect_first(&quad()), want);
        assert_eq!(reflect_first(&reflect_first(&quad())), quad());
    }

    #[test]
    fn marker_examples() {
        let m = Marker([0; 5]);
        assert_eq!(m.youngest(), 0);
        assert_eq!(m.successor(), Marker([1, 0, 0, 0, 0]));
        let m = Marker([2, 2, 1, 1, 1]);
        assert_eq!(m.youngest(), 2);
        assert_eq!(m.successor(), Marker([2, 2, 2, 1, 1]));
    }

    #[test]
    fn certify_examples() {
        let c = certify(&Polynomial::one(5), 10).unwrap();
        assert_eq!((c.status, c.steps), (Status::Nonnegative, 1));
        let c = certify(&quad(), 10).unwrap();
        assert_eq!((c.status, c.steps), (Status::Nonnegative, 3));
        let c = certify(&Polynomial::constant(5, -1), 10).unwrap();
        assert_eq!(c.status, Status::NegativeWitness);
        assert_eq!(c.witness.unwrap().value, r(-1, 1));
        let c = certify(&quad(), 2).unwrap();
        assert_eq!(c.status, Status::BudgetExhausted);
    }

    #[test]
    fn witness_at_interior_corner() {
        // (x1 - 3/4)^2 - 1/64 scaled by 64: negative near x1 = 3/4.
        let p = Polynomial::parse("35 0 0 0 0 0\n-96 1 0 0 0 0\n64 2 0 0 0 0", Some(5)).unwrap();
        let c = certify(&p, 10_000).unwrap();
        assert_eq!(c.status, Status::NegativeWitness);
        let w = c.witness.unwrap();
        assert!(w.value.is_negative());
        assert!(w.corner[0] > r(5, 8) && w.corner[0] < r(7, 8));
        assert!(w.box_value.is_negative());
        let par = certify_parallel(&p, 10_000).unwrap();
        assert_eq!(par.status, Status::NegativeWitness);
    }

    #[test]
    fn push_order_does_not_change_steps() {
        let p = Polynomial::parse(
            "3 0 0 0 0 0\n-4 1 1 0 0 0\n2 2 0 0 0 0\n2 0 2 0 0 0\n-1 0 0 1 0 0\n1 0 0 0 0 0",
            Some(5),
        )
        .unwrap();
        let a = certify(&p, 100_000).unwrap();
        let b = certify_with(
            &p,
            &CertifyOptions {
                push_order: PushOrder::RightThenLeft,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.status, b.status);
        if a.status == Status::Nonnegative {
            assert_eq!(a.steps, b.steps);
        }
    }

    #[test]
    fn replay_nonnegative() {
        let p = Polynomial::parse("37 0 0 0 0 0\n-96 1 0 0 0 0\n64 2 0 0 0 0", Some(5))
            .unwrap();
        let c = certify_with(
            &p,
            &CertifyOptions {
                record_leaves: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(c.status, Status::Nonnegative);
        let leaves = c.leaves.unwrap();
        assert!(replay(&p, &leaves).unwrap());
        assert!(!replay(&p, &leaves[1..]).unwrap());
        assert_eq!(
            parse_lineage(&lineage_string(&leaves[0])).unwrap(),
            leaves[0]
        );
        let par = certify_parallel(&p, c.steps).unwrap();
        assert_eq!(par.status, Status::Nonnegative);
        assert_eq!(par.steps, c.steps);
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((-20i64..=20, proptest::collection::vec(0u8..=3, 5)), 1..8)
            .prop_map(|terms| {
                let mut p = Polynomial::zero(5);
                for (c, e) in terms {
                    p = &p + &Polynomial::monomial(5, c, &e);
                }
                p
            })
    }

    fn cube_point() -> impl Strategy<Value = Vec<BigRational>> {
        proptest::collection::vec((0i64..=16).prop_map(|n| r(n, 16)), 5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dense_ops_match_sparse(p in small_poly(), axis in 0usize..5) {
            let dense = CubePoly::from_polynomial(&p).unwrap();
            let k = (5 - axis) % 5;
            let mut d = dense.clone();
            d.dilate(axis);
            prop_assert_eq!(d.to_polynomial(), rotate(&dilate_first(&rotate(&p, k)), axis));
            let mut rf = dense.clone();
            rf.reflect(axis);
            prop_assert_eq!(rf.to_polynomial(), rotate(&reflect_first(&rotate(&p, k)), axis));
            prop_assert_eq!(dense.is_wpd(), is_wpd(&p));
        }

        #[test]
        fn machine_and_big_paths_agree(p in small_poly(), shift in 90usize..=104, axis in 0usize..5) {
            // Coefficients straddling the machine-integer threshold.
            let big = p.scale(&(BigInt::one() << shift));
            let dense = CubePoly::from_polynomial(&big).unwrap();
            let k = (5 - axis) % 5;
            let (l, r) = dense.split(axis);
            let sparse_l = rotate(&dilate_first(&rotate(&big, k)), axis);
            let sparse_r = rotate(&dilate_first(&reflect_first(&rotate(&big, k))), axis);
            prop_assert_eq!(l.to_polynomial(), sparse_l);
            prop_assert_eq!(r.to_polynomial(), sparse_r);
            prop_assert_eq!(l.is_wpd(), is_wpd(&l.to_polynomial()));
            prop_assert_eq!(r.is_wpd(), is_wpd(&r.to_polynomial()));
        }

        #[test]
        fn children_agree_with_parent(p in small_poly(), x in cube_point(), axis in 0usize..5) {
            let dense = CubePoly::from_polynomial(&p).unwrap();
            let e = p.degree_in(axis);
            let scale = BigRational::from_integer(BigInt::one() << e);
            let (l, rt) = dense.split(axis);
            let two = r(2, 1);
            let mut xl = x.clone();
            xl[axis] = &x[axis] / &two;
            let mut xr = x.clone();
            xr[axis] = r(1, 1) - &x[axis] / &two;
            let lv = l.to_polynomial().evaluate_rational(&x).unwrap();
            let rv = rt.to_polynomial().evaluate_rational(&x).unwrap();
            prop_assert_eq!(lv, p.evaluate_rational(&xl).unwrap() * &scale);
            prop_assert_eq!(rv, p.evaluate_rational(&xr).unwrap() * &scale);
        }

        #[test]
        fn wpd_implies_nonnegative(p in small_poly(), x in cube_point()) {
            if is_wpd(&p) {
                prop_assert!(!p.evaluate_rational(&x).unwrap().is_negative());
            }
        }

        #[test]
        fn witness_corner_matches_box(p in small_poly()) {
            let c = certify(&p, 2000).unwrap();
            if let Some(w) = c.witness {
                prop_assert!(w.value.is_negative());
                let mut q = CubePoly::from_polynomial(&p).unwrap();
                for s in &w.lineage {
                    q = q.apply(*s);
                }
                prop_assert_eq!(q.constant_term(), w.box_value);
            }
        }
    }
}
