//! Horizon sweeps over running products.

/// Record-setting local peaks of a running log-product, plus the first
/// exponent reaching a threshold.
#[derive(Clone, Debug, Default)]
pub(crate) struct Ladder {
    pub first_hit: Option<(u64, f64)>,
    pub peaks: Vec<(u64, f64)>,
}

const MAX_PEAKS: usize = 48;

/// `values[i]` is the log-product at exponent `i + 1`.
pub(crate) fn ladder(values: &[f64], log_threshold: f64) -> Ladder {
    let mut out = Ladder::default();
    let mut record = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        let n = i as u64 + 1;
        if out.first_hit.is_none() && v >= log_threshold {
            out.first_hit = Some((n, v));
        }
        let next = values.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if v > record {
            record = v;
            if v >= next && out.peaks.len() < MAX_PEAKS {
                out.peaks.push((n, v));
            }
        }
    }
    out
}

/// Three-valued conjunction: a decided `false` wins over an undecided operand.
pub(crate) fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

pub(crate) fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}
