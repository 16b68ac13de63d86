//! Integration by pushforward along projective bundles.
//!
//! For the hyperplane class `x` of `P(E)` with `rank E = r`, pushing `x^(r-1+k)`
//! down to the base gives the Segre class `s_k(E)`, where `s = 1/c(E)`.
//! Every bundle here sits over the same P3 with `c_k(E)` a multiple of `a^k`,
//! so an integral is a product of Segre coefficients times the coefficient
//! of `a^3`.

use std::collections::HashMap;

use num_traits::Zero;

use super::{layout, Role};
use crate::error::{Error, Result};
use crate::ring::{rat, Rational};
use crate::spaces::SpaceKind;

/// Coefficients `s_0..s_3` of `1 / (1 + c1 t + c2 t^2 + c3 t^3)`.
pub fn segre_coefficients(chern: [i64; 3]) -> [i64; 4] {
    let c = [1, chern[0], chern[1], chern[2]];
    let mut s = [1i64, 0, 0, 0];
    for k in 1..4 {
        s[k] = -(1..=k).map(|i| c[i] * s[k - i]).sum::<i64>();
    }
    s
}

/// Integral of the monomial `prod name^exp` over the space.
pub fn integrate(kind: SpaceKind, exponents: &[(&str, u32)]) -> Result<Rational> {
    let gens = layout(kind);
    let mut exp: HashMap<&str, u32> = HashMap::new();
    for &(name, e) in exponents {
        if !gens.iter().any(|(g, _)| g == name) {
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        *exp.entry(name).or_insert(0) += e;
    }
    let mut a_power = 0;
    let mut coefficient: i64 = 1;
    for (name, role) in &gens {
        let e = exp.get(name.as_str()).copied().unwrap_or(0);
        match role {
            Role::Base => a_power += e,
            Role::Point => {
                if e != 3 {
                    return Ok(Rational::zero());
                }
            }
            Role::Bundle { rank, chern } => {
                let Some(k) = e.checked_sub(rank - 1) else {
                    return Ok(Rational::zero());
                };
                if k > 3 {
                    return Ok(Rational::zero());
                }
                coefficient *= segre_coefficients(*chern)[k as usize];
                a_power += k;
            }
        }
    }
    Ok(if a_power == 3 { rat(coefficient) } else { Rational::zero() })
}
