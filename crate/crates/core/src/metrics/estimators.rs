use super::histogram::{JointHistogram, PairHistogram};
use super::MetricsError;
use crate::engine::TraceSet;

/// Plug-in `I(next; env | current)` in bits.
///
/// Evaluated as `sum p(n,c,e) log2[ p(n,c,e) p(c) / (p(n,c) p(c,e)) ]` with
/// `0 log 0 = 0`. The true value is non-negative, so rounding noise below zero
/// is clipped.
pub fn conditional_mutual_information(hist: &JointHistogram) -> Result<f64, MetricsError> {
    hist.check()?;
    let [nn, nc, ne] = hist.dims();
    let total = hist.total_weight();
    let w = hist.weights();

    let mut p_c = vec![0.0; nc];
    let mut p_nc = vec![0.0; nn * nc];
    let mut p_ce = vec![0.0; nc * ne];
    for n in 0..nn {
        for c in 0..nc {
            let row = &w[(n * nc + c) * ne..(n * nc + c + 1) * ne];
            let mut s = 0.0;
            for (e, &v) in row.iter().enumerate() {
                p_ce[c * ne + e] += v;
                s += v;
            }
            p_nc[n * nc + c] += s;
            p_c[c] += s;
        }
    }

    let mut acc = 0.0;
    for n in 0..nn {
        for c in 0..nc {
            let base = (n * nc + c) * ne;
            let a = p_nc[n * nc + c];
            if a == 0.0 {
                continue;
            }
            for e in 0..ne {
                let v = w[base + e];
                if v == 0.0 {
                    continue;
                }
                // Ratios of raw weights; the total cancels.
                acc += v * ((v * p_c[c]) / (a * p_ce[c * ne + e])).log2();
            }
        }
    }
    Ok((acc / total).max(0.0))
}

/// Plug-in `I(state; env)` in bits.
pub fn mutual_information(hist: &PairHistogram) -> Result<f64, MetricsError> {
    hist.check()?;
    let [nx, ne] = hist.dims();
    let total = hist.total_weight();
    let w = hist.weights();
    let mut p_x = vec![0.0; nx];
    let mut p_e = vec![0.0; ne];
    for x in 0..nx {
        for e in 0..ne {
            let v = w[x * ne + e];
            p_x[x] += v;
            p_e[e] += v;
        }
    }
    let mut acc = 0.0;
    for x in 0..nx {
        for e in 0..ne {
            let v = w[x * ne + e];
            if v > 0.0 {
                acc += v * ((v * total) / (p_x[x] * p_e[e])).log2();
            }
        }
    }
    Ok((acc / total).max(0.0))
}

/// Running sums of per-step conditional mutual information.
///
/// `te[k] = cmi[0] + ... + cmi[k-1]`; the result has one more entry than the
/// input and starts at zero.
pub fn transfer_entropy(cmi_series: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(cmi_series.len() + 1);
    let mut sum = 0.0;
    out.push(sum);
    for &c in cmi_series {
        sum += c;
        out.push(sum);
    }
    out
}

/// Fraction of replicas alive at step `k`.
pub fn viability(traces: &TraceSet, k: usize) -> Result<f64, MetricsError> {
    if traces.is_empty() {
        return Err(MetricsError::EmptyEnsemble);
    }
    let mut alive = 0usize;
    for t in &traces.traces {
        let flag = *t.alive.get(k).ok_or(MetricsError::TraceTooShort {
            len: t.len(),
            k,
            needed: k + 1,
        })?;
        alive += usize::from(flag);
    }
    Ok(alive as f64 / traces.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_distribution_has_zero_cmi() {
        // p(c) p(n|c) p(e|c) with c-dependent factors.
        let (nn, nc, ne) = (3, 2, 4);
        let pc = [0.3, 0.7];
        let pn = [[0.2, 0.5, 0.3], [0.6, 0.1, 0.3]];
        let pe = [[0.1, 0.2, 0.3, 0.4], [0.25, 0.25, 0.4, 0.1]];
        let mut w = vec![0.0; nn * nc * ne];
        for n in 0..nn {
            for c in 0..nc {
                for e in 0..ne {
                    w[(n * nc + c) * ne + e] = pc[c] * pn[c][n] * pe[c][e];
                }
            }
        }
        let h = JointHistogram::from_weights([nn, nc, ne], w);
        assert!(conditional_mutual_information(&h).unwrap() < 1e-12);
    }

    #[test]
    fn perfect_copy_of_four_states_is_two_bits() {
        let mut h = JointHistogram::new(4, 1, 4);
        for s in 0..4 {
            h.add(s, 0, s, 0.25);
        }
        let cmi = conditional_mutual_information(&h).unwrap();
        assert!((cmi - 2.0).abs() < 1e-12, "{cmi}");
    }

    #[test]
    fn identity_channel_of_eight_states_is_three_bits() {
        let mut h = PairHistogram::new(8, 8);
        for s in 0..8 {
            h.add(s, s, 1.0);
        }
        assert!((mutual_information(&h).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn independent_pair_has_zero_mi() {
        let px = [0.1, 0.6, 0.3];
        let pe = [0.5, 0.25, 0.25];
        let w = px.iter().flat_map(|a| pe.iter().map(move |b| a * b)).collect();
        let h = PairHistogram::from_weights([3, 3], w);
        assert!(mutual_information(&h).unwrap() < 1e-12);
    }

    #[test]
    fn unnormalized_tables_are_rejected() {
        let h = JointHistogram::from_parts([1, 1, 2], vec![0.5, 0.5], 2.0);
        assert!(matches!(
            conditional_mutual_information(&h),
            Err(MetricsError::Unnormalized { .. })
        ));
        let h = JointHistogram::from_parts([1, 1, 2], vec![-0.5, 1.5], 1.0);
        assert_eq!(conditional_mutual_information(&h), Err(MetricsError::BadWeight));
        let h = PairHistogram::new(2, 2);
        assert!(mutual_information(&h).is_err());
    }

    #[test]
    fn te_is_partial_sums() {
        assert_eq!(transfer_entropy(&[0.0, 0.0]), vec![0.0; 3]);
        let te = transfer_entropy(&[0.1, 0.2, 0.3]);
        assert_eq!(te.len(), 4);
        assert!((te[3] - 0.6).abs() < 1e-15);
    }
}
