//! Scalar response functions `f: ℝ -> ℝ` used by parametric hub models.

/// A side-effect free scalar function with an optional analytic derivative.
pub trait Response {
    fn eval(&self, x: f64) -> f64;

    /// Analytic derivative, when known.
    fn derivative(&self, _x: f64) -> Option<f64> {
        None
    }
}

impl<F: Fn(f64) -> f64> Response for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// A function paired with its derivative.
#[derive(Debug, Clone, Copy)]
pub struct Analytic<F, D> {
    pub f: F,
    pub df: D,
}

impl<F, D> Response for Analytic<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn derivative(&self, x: f64) -> Option<f64> {
        Some((self.df)(x))
    }
}

/// Named parametric families, all with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `intercept + slope·x`
    Linear { intercept: f64, slope: f64 },
    /// `linear·n - quadratic·n²`
    QuadraticValue { linear: f64, quadratic: f64 },
    /// `scale·(1 - 1/(n + 1))`
    Saturating { scale: f64 },
}

impl Response for Family {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Family::Linear { intercept, slope } => intercept + slope * x,
            Family::QuadraticValue { linear, quadratic } => linear * x - quadratic * x * x,
            Family::Saturating { scale } => scale * (1.0 - 1.0 / (x + 1.0)),
        }
    }

    fn derivative(&self, x: f64) -> Option<f64> {
        Some(match *self {
            Family::Linear { slope, .. } => slope,
            Family::QuadraticValue { linear, quadratic } => linear - 2.0 * quadratic * x,
            Family::Saturating { scale } => scale / ((x + 1.0) * (x + 1.0)),
        })
    }
}
