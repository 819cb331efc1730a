//! The change of variables from the unit 5-cube onto a lattice 5-simplex.
//!
//! `U(a,b,c,d,e) = (a, ab, abc, abcd, abcde)` and
//! `V(a,b,c,d,e) = (1-a, a-b, b-c, c-d, d-e, e)` send the cube onto the
//! standard simplex; `W` sends barycentric weights to points. A polynomial is
//! nonnegative on the simplex iff its pullback is nonnegative on the cube.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::chambers::LatticeSimplex6;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// `V∘U` as six polynomials in five variables.
pub fn cube_to_barycentric() -> [Polynomial; 6] {
    // Prefix products 1, a, ab, abc, abcd, abcde.
    let prefix: Vec<Polynomial> = (0..=5)
        .map(|k| {
            let mut e = [0u8; 5];
            e[..k].iter_mut().for_each(|x| *x = 1);
            Polynomial::monomial(5, 1, &e)
        })
        .collect();
    std::array::from_fn(|k| {
        if k == 5 {
            prefix[5].clone()
        } else {
            &prefix[k] - &prefix[k + 1]
        }
    })
}

/// Barycentric weights of a cube point, evaluated directly.
pub fn barycentric_weights(x: &[BigRational]) -> Result<[BigRational; 6]> {
    if x.len() != 5 {
        return Err(Error::Arity {
            expected: 5,
            got: x.len(),
        });
    }
    let mut prefix = vec![BigRational::one()];
    for xi in x {
        let next = prefix.last().unwrap() * xi;
        prefix.push(next);
    }
    Ok(std::array::from_fn(|k| {
        if k == 5 {
            prefix[5].clone()
        } else {
            &prefix[k] - &prefix[k + 1]
        }
    }))
}

/// `Z = W∘V∘U` for one simplex; column `k` of `W` is the `k`-th listed vertex.
#[derive(Clone, Debug)]
pub struct PullbackMap {
    pub simplex_id: String,
    pub vertices: [[i64; 6]; 6],
    pub z: [Polynomial; 6],
}

pub fn build_pullback(sigma: &LatticeSimplex6) -> Result<PullbackMap> {
    if !sigma.is_nondegenerate() {
        return Err(Error::DegenerateSimplex(sigma.id.clone()));
    }
    let bary = cube_to_barycentric();
    let z = std::array::from_fn(|row| {
        let mut acc = Polynomial::zero(5);
        for (col, b) in bary.iter().enumerate() {
            let w = sigma.vertices[col][row];
            if w != 0 {
                acc = &acc + &b.scale(&BigInt::from(w));
            }
        }
        acc
    });
    Ok(PullbackMap {
        simplex_id: sigma.id.clone(),
        vertices: sigma.vertices,
        z,
    })
}

impl PullbackMap {
    /// `P∘Z`, a polynomial in five variables.
    pub fn pullback(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.nvars() != 6 {
            return Err(Error::Arity {
                expected: 6,
                got: p.nvars(),
            });
        }
        p.substitute(&self.z)
    }

    /// Image of a cube point, computed through barycentric weights.
    pub fn map_point(&self, x: &[BigRational]) -> Result<[BigRational; 6]> {
        let w = barycentric_weights(x)?;
        Ok(std::array::from_fn(|row| {
            w.iter()
                .zip(&self.vertices)
                .map(|(wk, v)| wk * BigRational::from_integer(v[row].into()))
                .sum()
        }))
    }
}

/// One-shot `P∘W_σ∘V∘U`.
pub fn pullback(p: &Polynomial, sigma: &LatticeSimplex6) -> Result<Polynomial> {
    build_pullback(sigma)?.pullback(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley_menger::{build_f, directional_derivative, EdgeSubset};
    use crate::chambers::{build_partitions, c_simplex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn corners_hit_vertices() {
        let ones = vec![r(1, 1); 5];
        let w = barycentric_weights(&ones).unwrap();
        assert_eq!(w[5], r(1, 1));
        assert!(w[..5].iter().all(|x| *x == r(0, 1)));
        let mut x = vec![r(1, 1); 5];
        x[0] = r(0, 1);
        assert_eq!(barycentric_weights(&x).unwrap()[0], r(1, 1));
        // Corner with k leading ones and then a zero lands on vertex k.
        for k in 0..5 {
            let x: Vec<BigRational> = (0..5).map(|i| r((i < k) as i64, 1)).collect();
            let w = barycentric_weights(&x).unwrap();
            for (j, wj) in w.iter().enumerate() {
                assert_eq!(*wj, r((j == k) as i64, 1));
            }
        }
    }

    #[test]
    fn cube_center_weights() {
        let x = vec![r(1, 2); 5];
        let w = barycentric_weights(&x).unwrap();
        let want = [r(1, 2), r(1, 4), r(1, 8), r(1, 16), r(1, 32), r(1, 32)];
        assert_eq!(w, want);
        let poly: Vec<BigRational> = cube_to_barycentric()
            .iter()
            .map(|p| p.evaluate_rational(&x).unwrap())
            .collect();
        assert_eq!(poly, want.to_vec());
    }

    #[test]
    fn coordinates_sum_to_24() {
        let m = build_pullback(&c_simplex(1, 1)).unwrap();
        let total = m.z.iter().fold(Polynomial::zero(5), |a, z| &a + z);
        assert_eq!(total, Polynomial::constant(5, 24));
    }

    #[test]
    fn constant_pulls_back_to_itself() {
        let one = Polynomial::one(6);
        assert_eq!(pullback(&one, &c_simplex(2, 1)).unwrap(), Polynomial::one(5));
        assert!(pullback(&Polynomial::one(5), &c_simplex(2, 1)).is_err());
    }

    #[test]
    fn two_path_evaluation() {
        let sigma = c_simplex(1, 1);
        let map = build_pullback(&sigma).unwrap();
        let f = build_f();
        let pf = map.pullback(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<BigRational> = (0..5).map(|_| r(rng.gen_range(0..=97), 97)).collect();
            let direct = pf.evaluate_rational(&x).unwrap();
            let via = f.evaluate_rational(&map.map_point(&x).unwrap()).unwrap();
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn degree_bound_on_chambers() {
        let f = build_f();
        let g = directional_derivative(EdgeSubset::K4);
        for ch in build_partitions().chambers.iter().step_by(7) {
            let map = build_pullback(&ch.simplex).unwrap();
            for p in [&f, &g] {
                let q = map.pullback(p).unwrap();
                assert!(q.check_degree_cap(6).is_ok());
            }
        }
    }
}
