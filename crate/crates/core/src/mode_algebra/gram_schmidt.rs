use num_complex::Complex64;

use super::{inner_product, SpectralMode};
use crate::error::{Error, Result};

/// Minimum squared residual of a normalised input after removing its
/// projection on the preceding outputs.
pub const INDEPENDENCE_TOLERANCE: f64 = 1e-12;

/// Orthonormalises `modes` in order; output `k` depends only on inputs `0..=k`.
///
/// Each input is normalised, projected against the accumulated basis twice
/// (classical Gram-Schmidt with one reorthogonalisation pass) and rejected
/// when its squared residual after the first pass falls below
/// [`INDEPENDENCE_TOLERANCE`].
pub fn gram_schmidt(modes: &[SpectralMode]) -> Result<Vec<SpectralMode>> {
    let mut basis: Vec<SpectralMode> = Vec::with_capacity(modes.len());
    for (index, mode) in modes.iter().enumerate() {
        if let Some(first) = modes.first() {
            if first.pulse() != mode.pulse() {
                return Err(Error::PulseMismatch);
            }
        }
        let mut v = mode.normalized().map_err(|_| Error::LinearDependence {
            index,
            residual: 0.0,
        })?;
        v = remove_projections(&v, &basis)?;
        let residual = v.norm_sqr();
        if residual < INDEPENDENCE_TOLERANCE {
            return Err(Error::LinearDependence { index, residual });
        }
        v = remove_projections(&v, &basis)?;
        basis.push(v.normalized()?);
    }
    Ok(basis)
}

pub(crate) fn remove_projections(
    v: &SpectralMode,
    basis: &[SpectralMode],
) -> Result<SpectralMode> {
    let mut out = v.clone();
    let coefficients: Vec<Complex64> = basis
        .iter()
        .map(|q| inner_product(q, v))
        .collect::<Result<_>>()?;
    for (q, c) in basis.iter().zip(coefficients) {
        out = out.add_scaled(-c, q)?;
    }
    Ok(out)
}
