//! Token-based function catalog.
//!
//! Scenario configs name functions by symbolic token rather than code, so a
//! config file fully determines a run. Supported tokens:
//!
//! - `poly:a0,a1,..`      polynomial in one variable, ascending powers
//! - `abs`                absolute value (one variable)
//! - `const:c`            constant
//! - `maxzero:theta`      `theta * sum_i max(0, z_i)`
//! - `sqnorm:theta`       `theta * |z|_2^2`
//! - `ind_nonpos`         indicator of the nonpositive orthant
//! - `ind_zero`           indicator of the origin (within 1e-8)
//! - `ind_box:lo,hi`      indicator of `[lo, hi]` per coordinate
//! - `pwl:x0,y0;x1,y1;..` piecewise-linear through the knots, extended with
//!   the end slopes

use std::fmt;
use std::sync::Arc;

use epikit::extreal::ExtReal;
use epikit::rockafellian::ExtFn;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog token '{0}'")]
    UnknownToken(String),
    #[error("token '{token}': {problem}")]
    BadArguments { token: String, problem: String },
}

/// A parsed catalog function, keeping its token for display and re-emission.
#[derive(Clone)]
pub struct CatalogFn {
    token: String,
    f: ExtFn,
}

impl CatalogFn {
    pub fn token(&self) -> &str {
        &self.token
    }

    pub fn func(&self) -> ExtFn {
        Arc::clone(&self.f)
    }

    pub fn eval(&self, z: &[f64]) -> ExtReal {
        (self.f)(z)
    }

    /// Scalar view for contexts that require finite values.
    pub fn scalar_fn(&self) -> epikit::rockafellian::ScalarFn {
        let f = Arc::clone(&self.f);
        Arc::new(move |z: &[f64]| f(z).to_f64())
    }
}

impl fmt::Debug for CatalogFn {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "CatalogFn({})", self.token)
    }
}

fn bad(token: &str, problem: impl Into<String>) -> CatalogError {
    CatalogError::BadArguments {
        token: token.to_string(),
        problem: problem.into(),
    }
}

fn parse_floats(token: &str, s: &str) -> Result<Vec<f64>, CatalogError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| bad(token, format!("'{part}': {e}")))
        })
        .collect()
}

/// Parses one token into an evaluator.
pub fn parse(token: &str) -> Result<CatalogFn, CatalogError> {
    let (head, rest) = match token.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (token, None),
    };
    let f: ExtFn = match (head, rest) {
        ("poly", Some(args)) => {
            let coeffs = parse_floats(token, args)?;
            if coeffs.is_empty() {
                return Err(bad(token, "needs at least one coefficient"));
            }
            Arc::new(move |z: &[f64]| {
                let x = z[0];
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                ExtReal::new(acc)
            })
        }
        ("abs", None) => Arc::new(|z: &[f64]| ExtReal::new(z[0].abs())),
        ("const", Some(args)) => {
            let c = parse_floats(token, args)?;
            if c.len() != 1 {
                return Err(bad(token, "needs exactly one value"));
            }
            let c = c[0];
            Arc::new(move |_: &[f64]| ExtReal::new(c))
        }
        ("maxzero", Some(args)) => {
            let theta = parse_floats(token, args)?;
            if theta.len() != 1 || theta[0] < 0.0 {
                return Err(bad(token, "needs one nonnegative weight"));
            }
            let theta = theta[0];
            Arc::new(move |z: &[f64]| {
                ExtReal::new(theta * z.iter().map(|c| c.max(0.0)).sum::<f64>())
            })
        }
        ("sqnorm", Some(args)) => {
            let theta = parse_floats(token, args)?;
            if theta.len() != 1 || theta[0] < 0.0 {
                return Err(bad(token, "needs one nonnegative weight"));
            }
            let theta = theta[0];
            Arc::new(move |z: &[f64]| ExtReal::new(theta * z.iter().map(|c| c * c).sum::<f64>()))
        }
        ("ind_nonpos", None) => Arc::new(|z: &[f64]| {
            if z.iter().all(|&c| c <= 0.0) {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        }),
        ("ind_zero", None) => Arc::new(|z: &[f64]| {
            if z.iter().all(|&c| c.abs() <= 1e-8) {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        }),
        ("ind_box", Some(args)) => {
            let bounds = parse_floats(token, args)?;
            if bounds.len() != 2 || bounds[0] > bounds[1] {
                return Err(bad(token, "needs lo,hi with lo <= hi"));
            }
            let (lo, hi) = (bounds[0], bounds[1]);
            Arc::new(move |z: &[f64]| {
                if z.iter().all(|&c| c >= lo && c <= hi) {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            })
        }
        ("pwl", Some(args)) => {
            let mut knots = Vec::new();
            for pair in args.split(';') {
                let xy = parse_floats(token, pair)?;
                if xy.len() != 2 {
                    return Err(bad(token, "each knot is x,y"));
                }
                knots.push((xy[0], xy[1]));
            }
            if knots.len() < 2 {
                return Err(bad(token, "needs at least two knots"));
            }
            if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(bad(token, "knot abscissas must strictly increase"));
            }
            Arc::new(move |z: &[f64]| {
                let x = z[0];
                let seg = match knots.iter().position(|&(kx, _)| x < kx) {
                    Some(0) => 0,
                    Some(i) => i - 1,
                    None => knots.len() - 2,
                };
                let (x0, y0) = knots[seg];
                let (x1, y1) = knots[seg + 1];
                let t = (x - x0) / (x1 - x0);
                ExtReal::new(y0 + t * (y1 - y0))
            })
        }
        _ => return Err(CatalogError::UnknownToken(token.to_string())),
    };
    Ok(CatalogFn {
        token: token.to_string(),
        f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_polynomial_token() {
        // (x - 1)^2 (x + 1) = 1 - x - x^2 + x^3
        let g = parse("poly:1,-1,-1,1").unwrap();
        for x in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0] {
            let expected = (x - 1.0) * (x - 1.0) * (x + 1.0);
            assert!((g.eval(&[x]).to_f64() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn indicator_tokens() {
        let nonpos = parse("ind_nonpos").unwrap();
        assert_eq!(nonpos.eval(&[-1.0, 0.0]), ExtReal::ZERO);
        assert_eq!(nonpos.eval(&[0.1, -5.0]), ExtReal::PosInf);
        let zero = parse("ind_zero").unwrap();
        assert_eq!(zero.eval(&[0.0]), ExtReal::ZERO);
        assert_eq!(zero.eval(&[1e-3]), ExtReal::PosInf);
    }

    #[test]
    fn penalty_tokens() {
        let mz = parse("maxzero:5").unwrap();
        assert_eq!(mz.eval(&[2.0]), ExtReal::Finite(10.0));
        assert_eq!(mz.eval(&[-2.0]), ExtReal::ZERO);
        let sq = parse("sqnorm:0.5").unwrap();
        assert_eq!(sq.eval(&[2.0]), ExtReal::Finite(2.0));
    }

    #[test]
    fn piecewise_linear_extends_end_slopes() {
        let f = parse("pwl:-1,1;0,0;1,1").unwrap();
        assert_eq!(f.eval(&[0.0]), ExtReal::ZERO);
        assert_eq!(f.eval(&[0.5]), ExtReal::Finite(0.5));
        assert_eq!(f.eval(&[2.0]), ExtReal::Finite(2.0));
        assert_eq!(f.eval(&[-3.0]), ExtReal::Finite(3.0));
    }

    #[test]
    fn malformed_tokens_are_rejected() {
        assert!(parse("poly:").is_err());
        assert!(parse("nope").is_err());
        assert!(parse("pwl:0,0").is_err());
        assert!(parse("ind_box:2,1").is_err());
    }
}
