//! Matrix-valued phase-space symbols destined for quantization.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::linalg::CMatrix;
use crate::spectral::family::fd_step;

type EvalFn = Arc<dyn Fn(f64, f64) -> CMatrix + Send + Sync>;
pub type CoeffFn = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// Declared behaviour of the symbol for large |p|, used by the aliasing
/// guard: polynomially growing symbols are exact spectral multipliers on the
/// dual grid, decaying symbols must be resolved by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PDecay {
    Polynomial,
    Decaying,
}

enum Kind {
    Generic(EvalFn),
    /// sum_r c_r(q) p^r with matrix coefficients.
    PolyP(Vec<CoeffFn>),
}

/// A smooth map (q, p) -> rows x cols complex matrix with optional analytic
/// derivatives. Quantization requires rows == cols.
pub struct Symbol {
    pub rows: usize,
    pub cols: usize,
    kind: Kind,
    dq: Option<EvalFn>,
    dp: Option<EvalFn>,
    pub hermitian: bool,
    pub decay: PDecay,
}

impl Symbol {
    pub fn generic(rows: usize, cols: usize, eval: impl Fn(f64, f64) -> CMatrix + Send + Sync + 'static) -> Self {
        Symbol {
            rows,
            cols,
            kind: Kind::Generic(Arc::new(eval)),
            dq: None,
            dp: None,
            hermitian: false,
            decay: PDecay::Polynomial,
        }
    }

    /// sum_r coeffs[r](q) p^r. The p-derivative is exact.
    pub fn poly_p(rows: usize, cols: usize, coeffs: Vec<CoeffFn>) -> Self {
        assert!(!coeffs.is_empty());
        Symbol {
            rows,
            cols,
            kind: Kind::PolyP(coeffs),
            dq: None,
            dp: None,
            hermitian: false,
            decay: PDecay::Polynomial,
        }
    }

    /// Scalar symbol from a plain closure.
    pub fn scalar(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Symbol::generic(1, 1, move |q, p| CMatrix::from_element(1, 1, C64::new(eval(q, p), 0.0)))
    }

    /// The coordinate symbol a(q,p) = q.
    pub fn coordinate() -> Self {
        Symbol::scalar(|q, _| q).assume_hermitian()
    }

    /// The momentum symbol a(q,p) = p.
    pub fn momentum() -> Self {
        Symbol::scalar(|_, p| p).assume_hermitian()
    }

    pub fn constant(m: CMatrix) -> Self {
        let (r, c) = m.shape();
        Symbol::generic(r, c, move |_, _| m.clone())
    }

    pub fn assume_hermitian(mut self) -> Self {
        self.hermitian = true;
        self
    }

    pub fn with_decay(mut self, decay: PDecay) -> Self {
        self.decay = decay;
        self
    }

    pub fn with_gradients(
        mut self,
        dq: impl Fn(f64, f64) -> CMatrix + Send + Sync + 'static,
        dp: impl Fn(f64, f64) -> CMatrix + Send + Sync + 'static,
    ) -> Self {
        self.dq = Some(Arc::new(dq));
        self.dp = Some(Arc::new(dp));
        self
    }

    pub fn eval(&self, q: f64, p: f64) -> CMatrix {
        match &self.kind {
            Kind::Generic(f) => f(q, p),
            Kind::PolyP(cs) => {
                let mut acc = CMatrix::zeros(self.rows, self.cols);
                let mut pw = 1.0;
                for c in cs {
                    acc += c(q) * C64::new(pw, 0.0);
                    pw *= p;
                }
                acc
            }
        }
    }

    pub fn grad_q(&self, q: f64, p: f64) -> CMatrix {
        if let Some(d) = &self.dq {
            return d(q, p);
        }
        let h = fd_step(q);
        (self.eval(q + h, p) - self.eval(q - h, p)) / C64::new(2.0 * h, 0.0)
    }

    pub fn grad_p(&self, q: f64, p: f64) -> CMatrix {
        if let Some(d) = &self.dp {
            return d(q, p);
        }
        if let Kind::PolyP(cs) = &self.kind {
            let mut acc = CMatrix::zeros(self.rows, self.cols);
            let mut pw = 1.0;
            for (r, c) in cs.iter().enumerate().skip(1) {
                acc += c(q) * C64::new(r as f64 * pw, 0.0);
                pw *= p;
            }
            return acc;
        }
        let h = fd_step(p);
        (self.eval(q, p + h) - self.eval(q, p - h)) / C64::new(2.0 * h, 0.0)
    }
}

/// Poisson bracket {A, B} = dA/dp dB/dq - dA/dq dB/dp, pointwise matrix
/// products in that order; bilinear, defined for conforming shapes (B may be
/// rectangular, e.g. a frame column block).
pub fn poisson_bracket(a: &Symbol, b: &Symbol) -> Symbol {
    assert_eq!(a.cols, b.rows, "bracket shapes must conform");
    let (ra, ca) = (a.rows, a.cols);
    let (rb, cb) = (b.rows, b.cols);
    assert_eq!(ra, ca, "left bracket operand must be square");
    let a1 = a.clone();
    let b1 = b.clone();
    Symbol::generic(rb, cb, move |q, p| {
        a1.grad_p(q, p) * b1.grad_q(q, p) - a1.grad_q(q, p) * b1.grad_p(q, p)
    })
}

impl Clone for Kind {
    fn clone(&self) -> Self {
        match self {
            Kind::Generic(f) => Kind::Generic(f.clone()),
            Kind::PolyP(cs) => Kind::PolyP(cs.clone()),
        }
    }
}

impl Clone for Symbol {
    fn clone(&self) -> Self {
        Symbol {
            rows: self.rows,
            cols: self.cols,
            kind: self.kind.clone(),
            dq: self.dq.clone(),
            dp: self.dp.clone(),
            hermitian: self.hermitian,
            decay: self.decay,
        }
    }
}
