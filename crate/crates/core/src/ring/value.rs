//! Runtime-typed ring elements, used where the backend is chosen from input.

use std::fmt;

use super::finite::{Elt, FiniteRing};
use super::mat::Mat;
use super::matrix::MatrixAlgebra;
use super::scalar::Rational;
use super::{Ring, RingDescriptor, RingKind};
use crate::error::{Error, Result};

/// Reading and printing element literals for a concrete backend.
pub trait Literal: Ring {
    fn parse_literal(&self, text: &str) -> Result<Self::Elem>;
    fn render(&self, x: &Self::Elem) -> String;
    fn wrap(&self, x: Self::Elem) -> RingValue;
    fn unwrap(&self, v: &RingValue) -> Result<Self::Elem>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Finite(Elt),
    Rational(Mat<Rational>),
    Float(Mat<f64>),
}

/// An element tagged with the ring it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct RingValue {
    pub ring: RingDescriptor,
    pub payload: Payload,
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Finite(e) => write!(f, "{e}"),
            Payload::Rational(m) => write!(f, "{m}"),
            Payload::Float(m) => write!(f, "{m}"),
        }
    }
}

fn mismatch(expected: &RingDescriptor, got: &RingDescriptor) -> Error {
    Error::RingMismatch { left: expected.to_string(), right: got.to_string() }
}

impl Literal for FiniteRing {
    fn parse_literal(&self, text: &str) -> Result<Elt> {
        self.parse_element(text)
    }
    fn render(&self, x: &Elt) -> String {
        self.label(*x).to_string()
    }
    fn wrap(&self, x: Elt) -> RingValue {
        RingValue { ring: self.descriptor(), payload: Payload::Finite(x) }
    }
    fn unwrap(&self, v: &RingValue) -> Result<Elt> {
        match &v.payload {
            Payload::Finite(e) if v.ring == self.descriptor() => {
                if e.index() >= self.size() {
                    return Err(Error::DimensionMismatch(format!("element {e} outside {}", v.ring)));
                }
                Ok(*e)
            }
            _ => Err(mismatch(&self.descriptor(), &v.ring)),
        }
    }
}

macro_rules! matrix_literal {
    ($scalar:ty, $variant:ident) => {
        impl Literal for MatrixAlgebra<$scalar> {
            fn parse_literal(&self, text: &str) -> Result<Mat<$scalar>> {
                self.parse_element(text)
            }
            fn render(&self, x: &Mat<$scalar>) -> String {
                x.to_string()
            }
            fn wrap(&self, x: Mat<$scalar>) -> RingValue {
                RingValue { ring: self.descriptor(), payload: Payload::$variant(x) }
            }
            fn unwrap(&self, v: &RingValue) -> Result<Mat<$scalar>> {
                match &v.payload {
                    Payload::$variant(m) if v.ring.kind == self.descriptor().kind => {
                        let n = self.dim();
                        if m.shape() != (n, n) {
                            return Err(Error::DimensionMismatch(format!(
                                "{}x{} payload in {}",
                                m.rows(),
                                m.cols(),
                                v.ring
                            )));
                        }
                        Ok(m.clone())
                    }
                    _ => Err(mismatch(&self.descriptor(), &v.ring)),
                }
            }
        }
    };
}

matrix_literal!(Rational, Rational);
matrix_literal!(f64, Float);

/// A backend selected at run time from a [`RingDescriptor`].
#[derive(Debug, Clone)]
pub enum AnyRing {
    Finite(FiniteRing),
    Rational(MatrixAlgebra<Rational>),
    Float(MatrixAlgebra<f64>),
}

impl AnyRing {
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        Ok(match descriptor.kind {
            RingKind::ModularIntegers { .. } | RingKind::MatrixOverPrimeField { .. } => {
                AnyRing::Finite(FiniteRing::new(descriptor)?)
            }
            RingKind::RationalMatrix { .. } => AnyRing::Rational(MatrixAlgebra::new(descriptor)?),
            RingKind::FloatMatrix { .. } => AnyRing::Float(MatrixAlgebra::new(descriptor)?),
        })
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match self {
            AnyRing::Finite(r) => r.descriptor(),
            AnyRing::Rational(r) => r.descriptor(),
            AnyRing::Float(r) => r.descriptor(),
        }
    }

    pub fn parse(&self, text: &str) -> Result<RingValue> {
        match self {
            AnyRing::Finite(r) => r.parse_literal(text).map(|x| r.wrap(x)),
            AnyRing::Rational(r) => r.parse_literal(text).map(|x| r.wrap(x)),
            AnyRing::Float(r) => r.parse_literal(text).map(|x| r.wrap(x)),
        }
    }

    pub fn render(&self, v: &RingValue) -> Result<String> {
        match self {
            AnyRing::Finite(r) => r.unwrap(v).map(|x| r.render(&x)),
            AnyRing::Rational(r) => r.unwrap(v).map(|x| r.render(&x)),
            AnyRing::Float(r) => r.unwrap(v).map(|x| r.render(&x)),
        }
    }

    pub fn arith(&self, x: &RingValue, y: &RingValue, op: ArithOp) -> Result<ArithOutcome> {
        fn go<R: Literal>(r: &R, x: &RingValue, y: &RingValue, op: ArithOp) -> Result<ArithOutcome> {
            let d = r.descriptor();
            for v in [x, y] {
                if v.ring != d {
                    return Err(mismatch(&d, &v.ring));
                }
            }
            let (a, b) = (r.unwrap(x)?, r.unwrap(y)?);
            Ok(match op {
                ArithOp::Add => ArithOutcome::Value(r.wrap(r.add(&a, &b))),
                ArithOp::Mul => ArithOutcome::Value(r.wrap(r.mul(&a, &b))),
                ArithOp::Neg => ArithOutcome::Value(r.wrap(r.neg(&a))),
                ArithOp::Eq => ArithOutcome::Truth(r.eq(&a, &b)),
            })
        }
        match self {
            AnyRing::Finite(r) => go(r, x, y, op),
            AnyRing::Rational(r) => go(r, x, y, op),
            AnyRing::Float(r) => go(r, x, y, op),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    /// Unary; the second operand is only checked for ring agreement.
    Neg,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArithOutcome {
    Value(RingValue),
    Truth(bool),
}

/// Arithmetic on two tagged values. The ring is rebuilt from the first
/// operand's descriptor; use [`AnyRing::arith`] in loops.
pub fn ring_arith(x: &RingValue, y: &RingValue, op: ArithOp) -> Result<ArithOutcome> {
    if x.ring != y.ring {
        return Err(mismatch(&x.ring, &y.ring));
    }
    AnyRing::new(x.ring)?.arith(x, y, op)
}
