use crate::error::{LabError, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

/// Which part of the spectrum a [`Spectrum`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Completeness {
    /// Every eigenvalue of the operator.
    Full,
    /// The lowest `m` eigenvalues.
    Lowest(usize),
    /// Every eigenvalue strictly below the cutoff.
    Below(f64),
}

/// Sorted eigenvalues with optional `l^2`-orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` belongs to `eigenvalues[k]`; entries follow the operator's
    /// cell numbering.
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    pub completeness: Completeness,
}

impl Spectrum {
    /// A spectrum known in closed form or assembled by hand; sorts the values.
    pub fn from_values(mut values: Vec<f64>, completeness: Completeness) -> Self {
        values.sort_by(f64::total_cmp);
        Self { eigenvalues: values, eigenvectors: None, completeness }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Every eigenvalue strictly below this value is present.
    pub fn complete_below(&self) -> f64 {
        match self.completeness {
            Completeness::Full => f64::INFINITY,
            Completeness::Lowest(_) => self.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY),
            Completeness::Below(cut) => cut,
        }
    }

    /// Errors unless all eigenvalues below `cutoff` are present.
    pub fn require_complete_below(&self, cutoff: f64) -> Result<()> {
        if cutoff <= self.complete_below() {
            Ok(())
        } else {
            Err(LabError::IncompleteSpectrum { requested: cutoff, complete_below: self.complete_below() })
        }
    }

    pub fn vectors(&self) -> Result<&[Vec<Complex64>]> {
        self.eigenvectors.as_deref().ok_or(LabError::MissingEigenvectors)
    }

    /// Largest `|<v_i, v_j> - delta_ij|`.
    pub fn gram_defect(&self) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        let mut worst = 0.0f64;
        for i in 0..v.len() {
            for j in 0..=i {
                let g: Complex64 = v[i].iter().zip(&v[j]).map(|(a, b)| a.conj() * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        Some(worst)
    }

    /// Keeps the eigenpairs strictly below `cutoff`.
    pub fn truncated_below(&self, cutoff: f64) -> Result<Spectrum> {
        self.require_complete_below(cutoff)?;
        let k = self.eigenvalues.partition_point(|&l| l < cutoff);
        Ok(Spectrum {
            eigenvalues: self.eigenvalues[..k].to_vec(),
            eigenvectors: self.eigenvectors.as_ref().map(|v| v[..k].to_vec()),
            completeness: Completeness::Below(cutoff),
        })
    }
}

/// Metadata written in front of a spectrum CSV.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumMeta {
    pub h: f64,
    pub bc: String,
    pub b: f64,
    pub domain_hash: String,
}

/// `# key=value` header lines, then `index,eigenvalue` rows (1-based index).
pub fn write_spectrum_csv<W: Write>(mut w: W, spectrum: &Spectrum, meta: &SpectrumMeta) -> Result<()> {
    writeln!(w, "# h={}", meta.h)?;
    writeln!(w, "# bc={}", meta.bc)?;
    writeln!(w, "# B={}", meta.b)?;
    writeln!(w, "# domain_hash={}", meta.domain_hash)?;
    writeln!(w, "index,eigenvalue")?;
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        writeln!(w, "{},{}", i + 1, l)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completeness_rules() {
        let s = Spectrum::from_values(vec![3.0, 1.0, 2.0], Completeness::Lowest(3));
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert!(s.require_complete_below(3.0).is_ok());
        assert!(s.require_complete_below(3.1).is_err());
        let t = s.truncated_below(2.5).unwrap();
        assert_eq!(t.eigenvalues, vec![1.0, 2.0]);
    }

    #[test]
    fn csv_layout() {
        let s = Spectrum::from_values(vec![0.5, 2.0], Completeness::Full);
        let meta = SpectrumMeta { h: 0.25, bc: "neumann".into(), b: 0.0, domain_hash: "ab".into() };
        let mut out = Vec::new();
        write_spectrum_csv(&mut out, &s, &meta).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "# h=0.25\n# bc=neumann\n# B=0\n# domain_hash=ab\nindex,eigenvalue\n1,0.5\n2,2\n");
    }
}
