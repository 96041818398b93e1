//! Evaluation handles for smooth Hermitian matrix families H(t) and H(q,p).

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, spectral_norm, CMatrix};

/// Relative Hermiticity tolerance enforced at every evaluation.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Central-difference step: cbrt(machine epsilon) times the parameter scale.
pub fn fd_step(scale: f64) -> f64 {
    f64::EPSILON.cbrt() * scale.abs().max(1.0)
}

fn check_hermitian(h: &CMatrix) -> Result<CMatrix> {
    let defect = hermiticity_defect(h);
    let scale = spectral_norm(h).max(1e-300);
    if defect > HERMITICITY_TOL * scale {
        return Err(Error::NonHermitian { defect: defect / scale, tol: HERMITICITY_TOL });
    }
    Ok(h.clone())
}

type TimeMap = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;
type PhaseMap = Arc<dyn Fn(f64, f64) -> CMatrix + Send + Sync>;

/// A smooth family t -> H(t) of Hermitian matrices on a time interval.
///
/// Derivatives fall back to central finite differences when no analytic map
/// is supplied; consumers only see the difference in accuracy. A model may
/// also carry an explicit band frame for gauge experiments.
#[derive(Clone)]
pub struct TimeFamily {
    pub dim: usize,
    pub interval: (f64, f64),
    eval: TimeMap,
    derivative: Option<TimeMap>,
    /// Model-supplied smooth band frame t -> n_f x m (columns orthonormal).
    pub frame: Option<TimeMap>,
}

impl TimeFamily {
    pub fn new(dim: usize, interval: (f64, f64), eval: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Self {
        TimeFamily { dim, interval, eval: Arc::new(eval), derivative: None, frame: None }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_frame(mut self, f: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Self {
        self.frame = Some(Arc::new(f));
        self
    }

    /// Evaluate H(t), enforcing Hermiticity.
    pub fn eval(&self, t: f64) -> Result<CMatrix> {
        check_hermitian(&(self.eval)(t))
    }

    /// Evaluate without the Hermiticity check (hot paths that already validated).
    pub fn eval_unchecked(&self, t: f64) -> CMatrix {
        (self.eval)(t)
    }

    /// dH/dt, analytic when supplied, else a central difference.
    pub fn derivative(&self, t: f64) -> CMatrix {
        match &self.derivative {
            Some(d) => d(t),
            None => {
                let h = fd_step(t);
                ((self.eval)(t + h) - (self.eval)(t - h)) / C64::new(2.0 * h, 0.0)
            }
        }
    }
}

/// A smooth family (q,p) -> H(q,p) of Hermitian matrices on a phase-space box.
#[derive(Clone)]
pub struct PhaseSpaceFamily {
    pub dim: usize,
    /// Rectangular domain (q_min, q_max, p_min, p_max).
    pub domain: (f64, f64, f64, f64),
    eval: PhaseMap,
    dq: Option<PhaseMap>,
    dp: Option<PhaseMap>,
    /// Model-supplied band frame (q,p) -> n_f x m.
    pub frame: Option<PhaseMap>,
}

impl PhaseSpaceFamily {
    pub fn new(
        dim: usize,
        domain: (f64, f64, f64, f64),
        eval: impl Fn(f64, f64) -> CMatrix + Send + Sync + 'static,
    ) -> Self {
        PhaseSpaceFamily { dim, domain, eval: Arc::new(eval), dq: None, dp: None, frame: None }
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

    pub fn with_frame(mut self, f: impl Fn(f64, f64) -> CMatrix + Send + Sync + 'static) -> Self {
        self.frame = Some(Arc::new(f));
        self
    }

    /// Born-Oppenheimer form p^2/2 + V(q) from a position-only family.
    pub fn born_oppenheimer(
        dim: usize,
        domain: (f64, f64, f64, f64),
        v: Arc<dyn Fn(f64) -> CMatrix + Send + Sync>,
        dv: Option<Arc<dyn Fn(f64) -> CMatrix + Send + Sync>>,
    ) -> Self {
        let v_eval = v.clone();
        let eval = move |q: f64, p: f64| {
            let mut h = v_eval(q);
            for i in 0..dim {
                h[(i, i)] += C64::new(0.5 * p * p, 0.0);
            }
            h
        };
        let v_dq = v.clone();
        let dq = move |q: f64, _p: f64| match &dv {
            Some(d) => d(q),
            None => {
                let h = fd_step(q);
                (v_dq(q + h) - v_dq(q - h)) / C64::new(2.0 * h, 0.0)
            }
        };
        let dp = move |_q: f64, p: f64| CMatrix::identity(dim, dim) * C64::new(p, 0.0);
        PhaseSpaceFamily::new(dim, domain, eval).with_gradients(dq, dp)
    }

    pub fn eval(&self, q: f64, p: f64) -> Result<CMatrix> {
        check_hermitian(&(self.eval)(q, p))
    }

    pub fn eval_unchecked(&self, q: f64, p: f64) -> CMatrix {
        (self.eval)(q, p)
    }

    pub fn grad_q(&self, q: f64, p: f64) -> CMatrix {
        match &self.dq {
            Some(d) => d(q, p),
            None => {
                let h = fd_step(q);
                ((self.eval)(q + h, p) - (self.eval)(q - h, p)) / C64::new(2.0 * h, 0.0)
            }
        }
    }

    pub fn grad_p(&self, q: f64, p: f64) -> CMatrix {
        match &self.dp {
            Some(d) => d(q, p),
            None => {
                let h = fd_step(p);
                ((self.eval)(q, p + h) - (self.eval)(q, p - h)) / C64::new(2.0 * h, 0.0)
            }
        }
    }
}
