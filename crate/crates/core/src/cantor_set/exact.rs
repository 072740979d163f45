//! Exact rational construction for rational ξ.
//!
//! Every depth-k endpoint is a polynomial in ξ with small integer coefficients,
//! so for rational ξ the interval list can be built without rounding and used
//! to check the floating-point builder.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ConstructionMode;
use crate::error::{Error, Result};

/// Closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub left: BigRational,
    pub right: BigRational,
}

impl RationalInterval {
    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.left.to_f64().unwrap_or(f64::NAN),
            self.right.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Build the depth-`depth` interval list for `xi = numer/denom` exactly.
pub fn build_exact(
    numer: i64,
    denom: i64,
    mode: ConstructionMode,
    depth: u32,
) -> Result<Vec<RationalInterval>> {
    if denom == 0 {
        return Err(Error::Domain("zero denominator".into()));
    }
    let xi = BigRational::new(BigInt::from(numer), BigInt::from(denom));
    let one = BigRational::one();
    if xi <= BigRational::zero() || xi >= one {
        return Err(Error::InvalidXi(numer as f64 / denom as f64));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));

    let mut intervals = vec![RationalInterval {
        left: BigRational::zero(),
        right: one.clone(),
    }];
    let mut removal = one;
    for step in 1..=depth {
        removal = &removal * &xi;
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for iv in &intervals {
            let len = &iv.right - &iv.left;
            let gap = match mode {
                ConstructionMode::Proportional => &len * &xi,
                ConstructionMode::AbsoluteRemoval => {
                    if removal >= len {
                        return Err(Error::DegenerateConstruction {
                            step,
                            removal: removal.to_f64().unwrap_or(f64::NAN),
                            length: len.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    removal.clone()
                }
            };
            let child = (&len - &gap) * &half;
            next.push(RationalInterval {
                left: iv.left.clone(),
                right: &iv.left + &child,
            });
            next.push(RationalInterval {
                left: &iv.right - &child,
                right: iv.right.clone(),
            });
        }
        intervals = next;
    }
    Ok(intervals)
}
