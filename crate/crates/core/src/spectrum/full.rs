use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::{refine_eigenvalue, transported_bracket, EigenvalueRecord};
use crate::error::{Error, Result};
use crate::exactnum::ErrorBounded;
use crate::scalar::int_pow;
use crate::tree::{fiber_multiplicity, Prime};
use crate::Rational;

/// One eigenvalue `p^{2m} λ_n` of `D*D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub m: u32,
    pub n: u32,
    pub value: ErrorBounded<Rational>,
    pub multiplicity: u64,
}

/// Every `(m, n)` with `p^{2m} λ_n ≤ cutoff`, decided on the certified upper
/// bracket end, sorted by value. Coinciding values stay separate entries.
pub fn dstar_d_spectrum(p: Prime, cutoff: &Rational, digits: u32) -> Result<Vec<SpectrumEntry>> {
    if !(cutoff > &Rational::zero()) {
        return Err(Error::InvalidParameter("cutoff must be positive".into()));
    }
    // λ_n > transported lower end, which grows like p^{2n-2}
    let mut n_max = 0;
    while transported_bracket(p, n_max + 1).0 <= *cutoff {
        n_max += 1;
    }
    let records = (1..=n_max)
        .into_par_iter()
        .map(|n| refine_eigenvalue(p, n, digits))
        .collect::<Result<Vec<EigenvalueRecord>>>()?;
    let mut out = Vec::new();
    for rec in &records {
        let mut m = 0;
        loop {
            let scale: Rational = int_pow(p.get(), 2 * m);
            if &rec.hi * &scale > *cutoff {
                break;
            }
            let half = Rational::new(1.into(), 2.into());
            out.push(SpectrumEntry {
                m,
                n: rec.index,
                value: ErrorBounded::new(rec.midpoint() * &scale, rec.width() * &scale * half),
                multiplicity: fiber_multiplicity(p, m),
            });
            m += 1;
        }
    }
    out.sort_by(|a, b| {
        a.value
            .center
            .cmp(&b.value.center)
            .then(a.m.cmp(&b.m))
            .then(a.n.cmp(&b.n))
    });
    Ok(out)
}
