//! Extended-real scalars with total addition and total order.
//!
//! Addition follows the convention that `+inf` absorbs everything, in
//! particular `(+inf) + (-inf) = +inf` in both argument orders. This keeps
//! sums of indicator terms well defined without case analysis at call sites.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A value in the extended real line `[-inf, +inf]`.
///
/// `Finite` always holds a finite, non-NaN float; constructors map IEEE
/// infinities onto the symbolic variants and reject NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

use ExtReal::{Finite, NegInf, PosInf};

impl ExtReal {
    pub const ZERO: ExtReal = Finite(0.0);

    /// Classifies a float, mapping `±inf` to the symbolic variants.
    ///
    /// Panics on NaN: a NaN has no place on the extended real line, and the
    /// grid sampler treats it as an input error before values get here.
    pub fn new(x: f64) -> ExtReal {
        assert!(!x.is_nan(), "NaN is not an extended real");
        if x == f64::INFINITY {
            PosInf
        } else if x == f64::NEG_INFINITY {
            NegInf
        } else {
            Finite(x)
        }
    }

    /// Non-panicking variant of [`ExtReal::new`].
    pub fn try_new(x: f64) -> Option<ExtReal> {
        if x.is_nan() {
            None
        } else {
            Some(ExtReal::new(x))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// The finite payload, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Collapses to a plain float, mapping the symbolic infinities back to
    /// IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            Finite(v) => v,
            PosInf => f64::INFINITY,
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> ExtReal {
        ExtReal::new(x)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    /// Total addition: any `+inf` operand wins, then any `-inf`, else the
    /// finite sum (re-classified in case it overflows).
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => ExtReal::new(a + b),
        }
    }
}

impl Sub for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: ExtReal) -> ExtReal {
        self + (-rhs)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        match self {
            NegInf => PosInf,
            Finite(v) => Finite(-v),
            PosInf => NegInf,
        }
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;

    /// Multiplication with the convention `0 * (+-inf) = 0`; used for the
    /// scale factors appearing in bound right-hand sides.
    fn mul(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (Finite(a), Finite(b)) => ExtReal::new(a * b),
            (Finite(a), inf) | (inf, Finite(a)) => {
                if a == 0.0 {
                    Finite(0.0)
                } else if a > 0.0 {
                    inf
                } else {
                    -inf
                }
            }
            (PosInf, PosInf) | (NegInf, NegInf) => PosInf,
            _ => NegInf,
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &ExtReal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &ExtReal) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            // Finite payloads are never NaN, so the partial order is total.
            (Finite(a), Finite(b)) => a.partial_cmp(b).expect("finite payloads are not NaN"),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => write!(f, "-inf"),
            Finite(v) => write!(f, "{v}"),
            PosInf => write!(f, "inf"),
        }
    }
}
