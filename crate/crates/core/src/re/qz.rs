//! Ordered generalized real Schur decomposition via LAPACK `dgges`.
//!
//! For a pencil `(P, Q)` this computes `P = Qz_l * S * Zr^T`,
//! `Q = Qz_l * T * Zr^T` with the generalized eigenvalues
//! `lambda_j = alpha_j / beta_j` satisfying `det(P - lambda Q) = 0`, sorted
//! so that all eigenvalues with `|lambda| < 1` (tolerance 1e-8, ties and
//! infinite eigenvalues classified non-stable) come first.

use nalgebra::DMatrix;
use std::os::raw::c_char;

type Selctg = extern "C" fn(*const f64, *const f64, *const f64) -> i32;

extern "C" {
    fn dgges_(
        jobvsl: *const c_char,
        jobvsr: *const c_char,
        sort: *const c_char,
        selctg: Option<Selctg>,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        sdim: *mut i32,
        alphar: *mut f64,
        alphai: *mut f64,
        beta: *mut f64,
        vsl: *mut f64,
        ldvsl: *const i32,
        vsr: *mut f64,
        ldvsr: *const i32,
        work: *mut f64,
        lwork: *const i32,
        bwork: *mut i32,
        info: *mut i32,
    );
}

pub const UNIT_CIRCLE_TOL: f64 = 1e-8;

extern "C" fn select_stable(ar: *const f64, ai: *const f64, beta: *const f64) -> i32 {
    // |alpha| < |beta| * (1 - tol); beta = 0 (infinite eigenvalue) is never stable
    unsafe {
        let modulus = (*ar).hypot(*ai);
        i32::from(modulus < (*beta).abs() * (1.0 - UNIT_CIRCLE_TOL))
    }
}

/// One generalized eigenvalue in homogeneous `(alpha, beta)` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedEigenvalue {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta: f64,
}

impl GeneralizedEigenvalue {
    pub fn is_stable(&self) -> bool {
        self.alpha_re.hypot(self.alpha_im) < self.beta.abs() * (1.0 - UNIT_CIRCLE_TOL)
    }

    /// Modulus of the eigenvalue; +inf when beta = 0.
    pub fn modulus(&self) -> f64 {
        let a = self.alpha_re.hypot(self.alpha_im);
        if self.beta == 0.0 {
            if a == 0.0 {
                f64::NAN
            } else {
                f64::INFINITY
            }
        } else {
            a / self.beta.abs()
        }
    }
}

#[derive(Debug)]
pub struct OrderedQz {
    /// Quasi-triangular transform of `P`.
    pub s: DMatrix<f64>,
    /// Triangular transform of `Q`.
    pub t: DMatrix<f64>,
    /// Right Schur vectors `Zr`.
    pub z: DMatrix<f64>,
    /// Number of eigenvalues inside the unit circle (sorted first).
    pub stable_count: usize,
    pub eigenvalues: Vec<GeneralizedEigenvalue>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum QzError {
    #[error("dgges failed with info = {0}")]
    Lapack(i32),
    #[error("dgges reordering became unreliable (info = n+2)")]
    Reordering,
}

/// Ordered QZ of the pencil `det(P - lambda Q) = 0`, stable block first.
pub fn ordered_qz(p: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<OrderedQz, QzError> {
    let n = p.nrows();
    assert_eq!(p.ncols(), n);
    assert_eq!(q.shape(), (n, n));

    // nalgebra stores column-major, matching LAPACK
    let mut s = p.clone();
    let mut t = q.clone();
    let mut z = DMatrix::<f64>::zeros(n, n);
    let mut alphar = vec![0.0; n];
    let mut alphai = vec![0.0; n];
    let mut beta = vec![0.0; n];
    let mut sdim: i32 = 0;
    let mut info: i32 = 0;
    let ni = n as i32;
    let lwork = (16 * n.max(1)) as i32;
    let mut work = vec![0.0; lwork as usize];
    let mut bwork = vec![0i32; n.max(1)];
    let mut vsl = [0.0f64; 1];

    unsafe {
        dgges_(
            c"N".as_ptr(),
            c"V".as_ptr(),
            c"S".as_ptr(),
            Some(select_stable),
            &ni,
            s.as_mut_slice().as_mut_ptr(),
            &ni,
            t.as_mut_slice().as_mut_ptr(),
            &ni,
            &mut sdim,
            alphar.as_mut_ptr(),
            alphai.as_mut_ptr(),
            beta.as_mut_ptr(),
            vsl.as_mut_ptr(),
            &1,
            z.as_mut_slice().as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            bwork.as_mut_ptr(),
            &mut info,
        );
    }

    if info == ni + 2 {
        return Err(QzError::Reordering);
    }
    if info != 0 {
        return Err(QzError::Lapack(info));
    }

    let eigenvalues = (0..n)
        .map(|i| GeneralizedEigenvalue {
            alpha_re: alphar[i],
            alpha_im: alphai[i],
            beta: beta[i],
        })
        .collect();

    Ok(OrderedQz {
        s,
        t,
        z,
        stable_count: sdim as usize,
        eigenvalues,
    })
}
