//! Cyclic Jacobi eigendecomposition for small Hermitian matrices, and the
//! spectral matrix functions built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

/// Inputs with a larger Hermiticity defect are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius mass at which a sweep sequence stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V f(Λ) V†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let diag: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        &(v * &ComplexMatrix::from_diagonal(&diag)) * &v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|l| Complex64::new(l, 0.0))
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.dim();

    // Work on the exactly Hermitian part.
    let mut a = (m + &m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&a);
        if off <= OFF_DIAGONAL_TOL {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable, so ties keep Jacobi order.
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`. The plane rotation is
/// `W = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` where `φ = arg a[p][q]`,
/// applied as `A ← W† A W`, `V ← V W`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    let n = a.dim();
    // A ← A W (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    // A ← W† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

/// `exp(-i t g)` for Hermitian `g`.
pub fn unitary_from_generator(g: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        let defect = g.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        return Ok(ComplexMatrix::identity(g.dim()));
    }
    let eig = hermitian_eig(g)?;
    Ok(eig.apply_fn(|l| Complex64::from_polar(1.0, -t * l)))
}

/// Entrywise check that `v` has orthonormal columns.
pub fn orthonormality_defect(v: &ComplexMatrix) -> f64 {
    (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.dim()))
}
