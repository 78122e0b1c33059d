use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {found}")]
    TooFew { needed: usize, found: usize },
    #[error("correlation undefined for a constant series")]
    Constant,
    #[error("values must be finite")]
    NonFinite,
    #[error("all values are equal; no bins can be formed")]
    Degenerate,
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFew {
            needed: 2,
            found: xs.len(),
        });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::Constant);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Quantile with linear interpolation between closest ranks (`sorted` ascending).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Quantile bins, left-open and right-closed, the lowest one also holding
/// the minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileBins {
    /// `bins() + 1` ascending edges.
    pub edges: Vec<f64>,
    pub labels: Vec<String>,
    /// Bin index for every input value, in input order.
    pub assignment: Vec<usize>,
    pub requested: usize,
}

impl QuantileBins {
    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    /// Fewer bins than requested because of duplicate edges.
    pub fn collapsed(&self) -> bool {
        self.bins() < self.requested
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.bins()];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }

    pub fn bin_of(&self, value: f64) -> Option<usize> {
        let last = *self.edges.last()?;
        if value < self.edges[0] || value > last {
            return None;
        }
        if value == self.edges[0] {
            return Some(0);
        }
        self.edges.windows(2).position(|w| w[0] < value && value <= w[1])
    }
}

const LABEL_PRECISION: i32 = 3;

/// Splits `values` into `n_bins` equal-frequency bins.
///
/// Edges are the 0, 1/n, .., 1 quantiles; repeated edges are merged, which
/// can leave fewer bins than requested. Labels follow the `(left, right]`
/// convention with the first left edge lowered by 0.001 so that the minimum
/// falls inside, e.g. `(53.999, 234.75]`.
pub fn quantile_bins(values: &[f64], n_bins: usize) -> Result<QuantileBins, StatsError> {
    if n_bins == 0 || values.len() < n_bins {
        return Err(StatsError::TooFew {
            needed: n_bins.max(1),
            found: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut edges: Vec<f64> = (0..=n_bins)
        .map(|i| quantile_sorted(&sorted, i as f64 / n_bins as f64))
        .collect();
    edges.dedup();
    if edges.len() < 2 {
        return Err(StatsError::Degenerate);
    }

    let mut breaks: Vec<f64> = edges.iter().map(|&e| round_frac(e, LABEL_PRECISION)).collect();
    breaks[0] -= 10f64.powi(-LABEL_PRECISION);
    let labels = breaks.windows(2).map(|w| format!("({:?}, {:?}]", w[0], w[1])).collect();

    let mut bins = QuantileBins {
        edges,
        labels,
        assignment: Vec::with_capacity(values.len()),
        requested: n_bins,
    };
    bins.assignment = values
        .iter()
        .map(|&v| bins.bin_of(v).expect("every value lies within the outer edges"))
        .collect();
    Ok(bins)
}

/// Rounds to `precision` significant fractional digits for display.
fn round_frac(x: f64, precision: i32) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let whole = x.trunc();
    let digits = if whole == 0.0 {
        -(x.fract().abs().log10().floor() as i32) - 1 + precision
    } else {
        precision
    };
    let scale = 10f64.powi(digits);
    (x * scale).round_ties_even() / scale
}
