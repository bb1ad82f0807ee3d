//! The ring abstraction and its concrete backends.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod finite;
pub mod linalg;
pub mod mat;
pub mod matrix;
pub mod scalar;
pub mod value;

pub use finite::{Elt, FiniteRing};
pub use linalg::LinearKernel;
pub use mat::{parse_nested, Mat};
pub use matrix::MatrixAlgebra;
pub use scalar::{Rational, Scalar};
pub use value::{ring_arith, AnyRing, ArithOp, ArithOutcome, Literal, Payload, RingValue};

/// Default equality and rank tolerance for the float backend.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingKind {
    ModularIntegers { n: u32 },
    MatrixOverPrimeField { p: u32, k: usize },
    RationalMatrix { k: usize },
    FloatMatrix { k: usize },
}

/// Identifies a ring together with its equality tolerance (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub kind: RingKind,
    pub tolerance: f64,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl RingDescriptor {
    pub fn modular(n: u32) -> Result<Self> {
        Self::new(RingKind::ModularIntegers { n }, 0.0)
    }

    pub fn prime_matrix(p: u32, k: usize) -> Result<Self> {
        Self::new(RingKind::MatrixOverPrimeField { p, k }, 0.0)
    }

    pub fn rational(k: usize) -> Result<Self> {
        Self::new(RingKind::RationalMatrix { k }, 0.0)
    }

    pub fn float(k: usize, tolerance: f64) -> Result<Self> {
        Self::new(RingKind::FloatMatrix { k }, tolerance)
    }

    pub fn new(kind: RingKind, tolerance: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        match kind {
            RingKind::ModularIntegers { n } if n < 2 => return bad(format!("modulus {n} < 2")),
            RingKind::MatrixOverPrimeField { p, .. } if !is_prime(p) => {
                return bad(format!("{p} is not prime"))
            }
            RingKind::MatrixOverPrimeField { k: 0, .. }
            | RingKind::RationalMatrix { k: 0 }
            | RingKind::FloatMatrix { k: 0 } => return bad("matrix size must be at least 1".into()),
            _ => {}
        }
        let exact = !matches!(kind, RingKind::FloatMatrix { .. });
        if exact && tolerance != 0.0 {
            return bad("exact backends take tolerance 0".into());
        }
        if !exact && !(tolerance > 0.0 && tolerance.is_finite()) {
            return bad(format!("float tolerance must be positive, got {tolerance}"));
        }
        Ok(RingDescriptor { kind, tolerance })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, RingKind::FloatMatrix { .. })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, RingKind::ModularIntegers { .. } | RingKind::MatrixOverPrimeField { .. })
    }

    /// Replaces the tolerance of a float descriptor; exact ones are unchanged.
    pub fn with_tolerance(self, tolerance: f64) -> Result<Self> {
        if self.is_exact() {
            Ok(self)
        } else {
            Self::new(self.kind, tolerance)
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::ModularIntegers { n } => write!(f, "Zn:{n}"),
            RingKind::MatrixOverPrimeField { p, k } => write!(f, "MFp:{p}:{k}"),
            RingKind::RationalMatrix { k } => write!(f, "Q:{k}"),
            RingKind::FloatMatrix { k } => write!(f, "R:{k}"),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = Error;

    /// Accepts `Zn:6`, `Z6`, `MFp:2:2`, `M2F2` (k=2, p=2), `Q:3` and `R:4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidDescriptor(format!("cannot read ring `{s}`"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["Zn", n] => Self::modular(num(n)?),
            ["MFp", p, k] => Self::prime_matrix(num(p)?, num(k)? as usize),
            ["Q", k] => Self::rational(num(k)? as usize),
            ["R", k] => Self::float(num(k)? as usize, DEFAULT_FLOAT_TOL),
            [short] => {
                if let Some(n) = short.strip_prefix('Z') {
                    Self::modular(num(n)?)
                } else if let Some(rest) = short.strip_prefix('M') {
                    let (k, p) = rest.split_once('F').ok_or_else(bad)?;
                    Self::prime_matrix(num(p)?, num(k)? as usize)
                } else {
                    Err(bad())
                }
            }
            _ => Err(bad()),
        }
    }
}

/// Which one-sided ideal or annihilator of an element is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `xR`
    ImageRight,
    /// `Rx`
    ImageLeft,
    /// `{r : x r = 0}`
    KernelRight,
    /// `{r : r x = 0}`
    KernelLeft,
}

/// An ideal either as an explicit sorted element list or, for matrix
/// algebras, as a subspace. Column sides (`ImageRight`, `KernelRight`) hold a
/// basis of the column space that every member's columns lie in; row sides
/// hold the same for the members' transposes.
#[derive(Debug, Clone, PartialEq)]
pub enum IdealRepresentation<E> {
    Elements(Vec<E>),
    Subspace { side: Side, basis: E },
}

/// A unital ring with decidable (possibly tolerance-based) equality.
///
/// Implementations must be pure; every method may be called concurrently.
pub trait Ring: Send + Sync {
    type Elem: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn descriptor(&self) -> RingDescriptor;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// Equality under the descriptor's tolerance.
    fn eq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    /// Size used to scale residuals: the spectral norm on matrix algebras,
    /// and 0 or 1 on finite rings.
    fn norm(&self, x: &Self::Elem) -> f64;
    /// Whether `residual` counts as zero for a quantity of magnitude `scale`.
    fn residual_ok(&self, residual: &Self::Elem, scale: f64) -> bool;

    fn invert(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn is_right_invertible(&self, x: &Self::Elem) -> bool;
    fn is_left_invertible(&self, x: &Self::Elem) -> bool;
    /// All inner inverses (finite backends, sorted in enumeration order) or a
    /// single canonical one (matrix backends).
    fn inner_inverses(&self, b: &Self::Elem) -> Result<Vec<Self::Elem>>;

    fn ideal(&self, x: &Self::Elem, side: Side) -> IdealRepresentation<Self::Elem>;
    fn ideal_contains(&self, ideal: &IdealRepresentation<Self::Elem>, y: &Self::Elem) -> bool;
    /// Inclusion `i ⊆ j` of two ideals taken on the same side.
    fn ideal_subset(
        &self,
        i: &IdealRepresentation<Self::Elem>,
        j: &IdealRepresentation<Self::Elem>,
    ) -> bool;

    /// Every element, for rings small enough to enumerate.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// The anti-automorphism used for left/right duality, where one exists.
    fn transpose(&self, _x: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        self.eq(x, &self.zero())
    }

    fn is_idempotent(&self, x: &Self::Elem) -> bool {
        self.eq(&self.mul(x, x), x)
    }

    fn is_unit(&self, x: &Self::Elem) -> bool {
        self.invert(x).is_ok()
    }

    fn one_minus(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.one(), x)
    }

    /// Left-to-right product of a nonempty list.
    fn product(&self, factors: &[&Self::Elem]) -> Self::Elem {
        let (first, rest) = factors.split_first().expect("empty product");
        rest.iter().fold((*first).clone(), |acc, f| self.mul(&acc, f))
    }

    /// Whether `y ∈ xR`, `y ∈ Rx`, ... as selected by `side`.
    fn in_ideal(&self, x: &Self::Elem, side: Side, y: &Self::Elem) -> bool {
        self.ideal_contains(&self.ideal(x, side), y)
    }

    fn ideal_eq(&self, x: &Self::Elem, y: &Self::Elem, side: Side) -> bool {
        let (i, j) = (self.ideal(x, side), self.ideal(y, side));
        self.ideal_subset(&i, &j) && self.ideal_subset(&j, &i)
    }

    fn ideal_le(&self, x: &Self::Elem, y: &Self::Elem, side: Side) -> bool {
        self.ideal_subset(&self.ideal(x, side), &self.ideal(y, side))
    }

    fn is_regular(&self, b: &Self::Elem) -> bool {
        self.inner_inverses(b).is_ok()
    }

    fn is_inner_inverse(&self, b: &Self::Elem, g: &Self::Elem) -> bool {
        let bgb = self.product(&[b, g, b]);
        self.residual_ok(&self.sub(&bgb, b), self.norm(b) * self.norm(g) * self.norm(b))
    }

    /// `w b w`, which is both an inner and an outer inverse of `b`.
    fn normalized_inner_inverse(&self, b: &Self::Elem, w: &Self::Elem) -> Result<Self::Elem> {
        if !self.is_inner_inverse(b, w) {
            return Err(Error::PreconditionFailed(format!("{w} is not an inner inverse of {b}")));
        }
        Ok(self.product(&[w, b, w]))
    }
}
