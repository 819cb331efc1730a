//! Exact witnesses `f > 0`, `g < 0` inside chambers outside `X_beta`.
//!
//! A trial draws barycentric weights as the spacings of sorted uniform
//! integers in `[0, scale]`, maps them through the chamber's vertex matrix and
//! evaluates `f` and `g` exactly.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cayley_menger::{
    build_f, cm_determinant_value, directional_derivative, directional_derivative_value,
    EdgeSubset,
};
use crate::chambers::{build_partitions, in_pseudo_cone, in_x_beta, Chamber};
use crate::error::{Error, Result};

pub const DEFAULT_SCALE: u64 = 10_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_display")]
    pub beta: EdgeSubset,
    pub chamber: String,
    pub point: [i64; 6],
    #[serde(serialize_with = "ser_display")]
    pub f: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub g: BigInt,
    /// Seed and trial index that produced the point; absent for parsed lines.
    pub seed: Option<u64>,
    pub trial: Option<u64>,
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl fmt::Display for Witness {
    /// `<beta> <chamber-id> <p1..p6> <f> <g>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.beta, self.chamber)?;
        for x in self.point {
            write!(f, " {x}")?;
        }
        write!(f, " {} {}", self.f, self.g)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AntiCertOutcome {
    pub witness: Option<Witness>,
    pub trials: u64,
}

#[derive(Clone, Debug)]
pub struct AntiCertOptions {
    pub trials: u64,
    pub seed: u64,
    pub scale: u64,
    pub parallel: bool,
}

impl Default for AntiCertOptions {
    fn default() -> Self {
        AntiCertOptions {
            trials: 100_000,
            seed: 0,
            scale: DEFAULT_SCALE,
            parallel: false,
        }
    }
}

/// Barycentric weights for one trial: spacings of five sorted uniform
/// integers in `[0, scale]`. Each trial has its own stream, so results do not
/// depend on evaluation order.
pub fn trial_weights(seed: u64, trial: u64, scale: u64) -> [u64; 6] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut cuts: [u64; 5] = std::array::from_fn(|_| rng.gen_range(0..=scale));
    cuts.sort_unstable();
    std::array::from_fn(|k| {
        let hi = if k == 5 { scale } else { cuts[k] };
        let lo = if k == 0 { 0 } else { cuts[k - 1] };
        hi - lo
    })
}

fn candidate(ch: &Chamber, w: &[u64; 6]) -> [i64; 6] {
    std::array::from_fn(|row| {
        ch.simplex
            .vertices
            .iter()
            .zip(w)
            .map(|(v, &wk)| v[row] * wk as i64)
            .sum()
    })
}

/// Exact test of one candidate point.
fn accept(beta: EdgeSubset, ch: &Chamber, p: &[i64; 6]) -> Option<(BigInt, BigInt)> {
    if !ch.decoration.contains_int(&p.map(|x| x as i128)) || !in_pseudo_cone(p) {
        return None;
    }
    let f = build_f().evaluate_i64(p).ok()?;
    if !f.is_positive() {
        return None;
    }
    let g = directional_derivative(beta).evaluate_i64(p).ok()?;
    g.is_negative().then_some((f, g))
}

pub fn anti_certify(
    ch: &Chamber,
    beta: EdgeSubset,
    opts: &AntiCertOptions,
) -> Result<AntiCertOutcome> {
    // Keep L q* well inside i64: coordinates are at most 8 * scale.
    if opts.scale == 0 || opts.scale > 1 << 58 {
        return Err(Error::InvalidArgument(format!(
            "snap scale {} outside 1..=2^58",
            opts.scale
        )));
    }
    let attempt = |trial: u64| {
        let w = trial_weights(opts.seed, trial, opts.scale);
        let p = candidate(ch, &w);
        accept(beta, ch, &p).map(|(f, g)| Witness {
            beta,
            chamber: ch.simplex.id.clone(),
            point: p,
            f,
            g,
            seed: Some(opts.seed),
            trial: Some(trial),
        })
    };
    let witness = if opts.parallel {
        (0..opts.trials).into_par_iter().find_map_first(attempt)
    } else {
        (0..opts.trials).find_map(attempt)
    };
    let trials = witness
        .as_ref()
        .and_then(|w| w.trial)
        .map_or(opts.trials, |t| t + 1);
    Ok(AntiCertOutcome { witness, trials })
}

/// Independent check through the determinant and its cofactors.
pub fn verify_witness(w: &Witness) -> Result<bool> {
    let parts = build_partitions();
    let ch = parts.chamber(&w.chamber)?;
    let d: Vec<BigInt> = w.point.iter().map(|&x| BigInt::from(x)).collect();
    let f = cm_determinant_value(&d);
    let g = directional_derivative_value(w.beta, &d);
    Ok(f == w.f
        && g == w.g
        && f.is_positive()
        && g.is_negative()
        && in_pseudo_cone(&w.point)
        && ch.decoration.contains_int(&w.point.map(|x| x as i128))
        && in_x_beta(w.beta, &ch.decoration) == Some(false))
}

pub fn parse_witnesses(text: &str) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse {
            line: n + 1,
            msg: msg.to_string(),
        };
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 10 {
            return Err(bad("expected 10 fields"));
        }
        let beta: EdgeSubset = tok[0].parse()?;
        let mut point = [0i64; 6];
        for k in 0..6 {
            point[k] = tok[2 + k].parse().map_err(|_| bad("bad coordinate"))?;
        }
        let f: BigInt = tok[8].parse().map_err(|_| bad("bad f value"))?;
        let g: BigInt = tok[9].parse().map_err(|_| bad("bad g value"))?;
        out.push(Witness {
            beta,
            chamber: tok[1].to_string(),
            point,
            f,
            g,
            seed: None,
            trial: None,
        });
    }
    Ok(out)
}

pub fn load_witnesses(path: &Path) -> Result<Vec<Witness>> {
    parse_witnesses(&std::fs::read_to_string(path)?)
}

/// The golden witness set shipped with the crate.
pub fn golden_witnesses() -> Vec<Witness> {
    parse_witnesses(include_str!("../data/witnesses.txt")).expect("well-formed golden file")
}

/// Representatives of the edge-subset classes with a known `X_beta`, other than K4.
pub fn witness_betas() -> Vec<EdgeSubset> {
    ["12", "12,13", "12,34", "12,13,14", "12,14,23", "12,13,24,34", "12,13,23"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

/// Chambers outside `X_beta`.
pub fn excluded_chambers(beta: EdgeSubset) -> Vec<&'static Chamber> {
    build_partitions()
        .chambers
        .iter()
        .filter(|c| in_x_beta(beta, &c.decoration) == Some(false))
        .collect()
}

/// Searches every excluded chamber for every representative `beta`.
pub fn generate_golden(opts: &AntiCertOptions) -> Result<(Vec<Witness>, Vec<(EdgeSubset, String)>)> {
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for beta in witness_betas() {
        for ch in excluded_chambers(beta) {
            match anti_certify(ch, beta, opts)?.witness {
                Some(w) => found.push(w),
                None => missing.push((beta, ch.simplex.id.clone())),
            }
        }
    }
    Ok((found, missing))
}

pub fn format_witnesses(ws: &[Witness], seed: u64) -> String {
    let mut s = format!("# anti-certification witnesses, seed {seed}\n# beta chamber p1 p2 p3 p4 p5 p6 f g\n");
    for w in ws {
        s.push_str(&w.to_string());
        s.push('\n');
    }
    s
}

/// Number of chambers for which `beta = K4` admits no witness in `trials` each.
pub fn k4_search(trials_per_chamber: u64, seed: u64) -> Result<(usize, u64)> {
    let mut clean = 0;
    let mut total = 0;
    let opts = AntiCertOptions {
        trials: trials_per_chamber,
        seed,
        ..Default::default()
    };
    for ch in &build_partitions().chambers {
        let out = anti_certify(ch, EdgeSubset::K4, &opts)?;
        total += out.trials;
        if out.witness.is_none() {
            clean += 1;
        }
    }
    Ok((clean, total))
}
