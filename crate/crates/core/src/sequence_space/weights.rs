use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    #[default]
    Bilateral,
    Unilateral,
}

/// A weight in JSON: `[re, im]` or a bare real number.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

fn de_weights<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
    let raw: Vec<Entry> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|e| match e {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        })
        .collect())
}

fn de_opt_weights<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Complex64>>, D::Error> {
    #[derive(Deserialize)]
    struct Wrap(#[serde(deserialize_with = "de_weights")] Vec<Complex64>);
    Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Core {
    pub start_index: i64,
    #[serde(default, deserialize_with = "de_weights")]
    pub values: Vec<Complex64>,
}

/// Named generators that override the piecewise description.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    /// `w_n = t` for `n >= 0`; on the negative side, blocks of lengths
    /// 1, 2, 4, 8, ... alternating between `t` and `1/t`, starting with `t` at `-1`.
    DoublingBlocks { t: f64 },
    /// `w_n = alpha` for `n < 0` and `1/alpha` for `n >= 0`.
    TheoremD { alpha: f64 },
    /// `w_n = mu_left` for `n < 0` and `mu_right` for `n >= 0`.
    UniformExpansivePair { mu_left: f64, mu_right: f64 },
}

/// Analytic facts about a generator family that a finite search cannot establish.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Annotation {
    SpectralRadii { r_fw: f64, r_fw_inv: f64 },
    NotUniformlyExpansive,
    NotUniformlyPositivelyExpansive,
}

/// Validated finitary weight sequence.
///
/// Index rules: the core occupies `start_index .. start_index + len`; the right
/// period starts right after it, and the left period ends at `start_index - 1`
/// and repeats toward minus infinity. Unilateral sequences live on `1, 2, ...`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "WeightDescription")]
pub struct WeightSequence {
    pub support: Support,
    pub left_period: Option<Vec<Complex64>>,
    pub core: Core,
    pub right_period: Vec<Complex64>,
    pub family: Option<Family>,
    pub annotations: Vec<Annotation>,
    /// `inf |w_n| > 0` on a bilateral index set.
    pub invertible: bool,
    /// Core positions holding an exact zero.
    pub zero_weights: Vec<i64>,
    #[serde(skip)]
    right_prefix: Vec<f64>,
    // log-moduli of the left period read from its last element backwards
    #[serde(skip)]
    left_prefix: Vec<f64>,
}

/// Input form of a weight sequence, as read from JSON.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct WeightDescription {
    #[serde(default)]
    pub support: Support,
    #[serde(default, deserialize_with = "de_opt_weights")]
    pub left_period: Option<Vec<Complex64>>,
    #[serde(default)]
    pub core: Option<Core>,
    #[serde(default, deserialize_with = "de_opt_weights")]
    pub right_period: Option<Vec<Complex64>>,
    #[serde(default)]
    pub family: Option<Family>,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

impl TryFrom<WeightDescription> for WeightSequence {
    type Error = Error;

    fn try_from(d: WeightDescription) -> Result<Self> {
        make_weights(d)
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn check_scalar(v: f64, what: &str) -> Result<()> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::InvalidWeights(format!("{what} must be finite and nonzero, got {v}")));
    }
    Ok(())
}

fn prefix(logs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0];
    for l in logs {
        out.push(out.last().unwrap() + l);
    }
    out
}

/// `sum_{r = r0}^{r1} logs[r mod L]` from a prefix table of length `L + 1`.
fn periodic_sum(prefix: &[f64], r0: u64, r1: u64) -> f64 {
    let len = (prefix.len() - 1) as u64;
    let total = prefix[len as usize];
    let upto = |r: u64| (r / len) as f64 * total + prefix[(r % len) as usize];
    upto(r1 + 1) - upto(r0)
}

fn floor_log2(m: u64) -> u32 {
    63 - m.leading_zeros()
}

/// Validates a description into a [`WeightSequence`].
pub fn make_weights(d: WeightDescription) -> Result<WeightSequence> {
    let mut annotations = d.annotations;
    let (support, left, core, right) = match d.family {
        Some(Family::TheoremD { alpha }) => {
            check_scalar(alpha, "alpha")?;
            (Support::Bilateral, Some(vec![real(alpha)]), Core::default(), vec![real(1.0 / alpha)])
        }
        Some(Family::UniformExpansivePair { mu_left, mu_right }) => {
            check_scalar(mu_left, "mu_left")?;
            check_scalar(mu_right, "mu_right")?;
            (Support::Bilateral, Some(vec![real(mu_left)]), Core::default(), vec![real(mu_right)])
        }
        Some(Family::DoublingBlocks { t }) => {
            check_scalar(t, "t")?;
            let r = t.abs().max(1.0 / t.abs());
            for fact in [
                Annotation::SpectralRadii { r_fw: r, r_fw_inv: r },
                Annotation::NotUniformlyExpansive,
                Annotation::NotUniformlyPositivelyExpansive,
            ] {
                if !annotations.contains(&fact) {
                    annotations.push(fact);
                }
            }
            (Support::Bilateral, None, Core::default(), vec![real(t)])
        }
        None => {
            if !annotations.is_empty() {
                return Err(Error::InvalidWeights("annotations are only accepted on a generator family".into()));
            }
            let right = d.right_period.ok_or(Error::EmptyPeriod("right"))?;
            let core = d.core.unwrap_or(Core {
                start_index: if d.support == Support::Unilateral { 1 } else { 0 },
                values: vec![],
            });
            let left = match (d.support, d.left_period) {
                (Support::Bilateral, None) => return Err(Error::EmptyPeriod("left")),
                (Support::Bilateral, Some(l)) => Some(l),
                (Support::Unilateral, None) => None,
                (Support::Unilateral, Some(_)) => {
                    return Err(Error::InvalidWeights("a unilateral sequence has no left period".into()))
                }
            };
            if d.support == Support::Unilateral && core.start_index < 1 {
                return Err(Error::InvalidWeights(format!(
                    "unilateral weights start at index 1, core starts at {}",
                    core.start_index
                )));
            }
            (d.support, left, core, right)
        }
    };

    if right.is_empty() {
        return Err(Error::EmptyPeriod("right"));
    }
    if matches!(&left, Some(l) if l.is_empty()) {
        return Err(Error::EmptyPeriod("left"));
    }
    for (name, period) in [("right", Some(&right)), ("left", left.as_ref())] {
        for w in period.into_iter().flatten() {
            if !(w.re.is_finite() && w.im.is_finite()) || w.norm() == 0.0 {
                return Err(Error::InvalidWeights(format!("{name} period entries must be finite and nonzero")));
            }
        }
    }
    if core.values.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
        return Err(Error::InvalidWeights("core weights must be finite".into()));
    }
    let zero_weights: Vec<i64> = core
        .values
        .iter()
        .enumerate()
        .filter(|(_, w)| w.norm() == 0.0)
        .map(|(i, _)| core.start_index + i as i64)
        .collect();

    let right_prefix = prefix(right.iter().map(|w| w.norm().ln()));
    let left_prefix = left.as_ref().map(|l| prefix(l.iter().rev().map(|w| w.norm().ln()))).unwrap_or_default();
    Ok(WeightSequence {
        invertible: support == Support::Bilateral && zero_weights.is_empty(),
        support,
        left_period: left,
        core,
        right_period: right,
        family: d.family,
        annotations,
        zero_weights,
        right_prefix,
        left_prefix,
    })
}

impl WeightSequence {
    pub fn from_family(family: Family) -> Result<Self> {
        make_weights(WeightDescription { family: Some(family), ..Default::default() })
    }

    pub fn theorem_d(alpha: f64) -> Result<Self> {
        Self::from_family(Family::TheoremD { alpha })
    }

    pub fn doubling_blocks(t: f64) -> Result<Self> {
        Self::from_family(Family::DoublingBlocks { t })
    }

    pub fn uniform_expansive_pair(mu_left: f64, mu_right: f64) -> Result<Self> {
        Self::from_family(Family::UniformExpansivePair { mu_left, mu_right })
    }

    /// Bilateral sequence with the given periods and core.
    pub fn bilateral(left: Vec<Complex64>, core_start: i64, core: Vec<Complex64>, right: Vec<Complex64>) -> Result<Self> {
        make_weights(WeightDescription {
            support: Support::Bilateral,
            left_period: Some(left),
            core: Some(Core { start_index: core_start, values: core }),
            right_period: Some(right),
            ..Default::default()
        })
    }

    /// Bilateral sequence with real periods and core.
    pub fn bilateral_real(left: &[f64], core_start: i64, core: &[f64], right: &[f64]) -> Result<Self> {
        let c = |v: &[f64]| v.iter().map(|&x| real(x)).collect();
        Self::bilateral(c(left), core_start, c(core), c(right))
    }

    /// Constant weight `c` on all of the integers.
    pub fn constant(c: f64) -> Result<Self> {
        Self::bilateral_real(&[c], 0, &[], &[c])
    }

    pub fn unilateral(core_start: i64, core: Vec<Complex64>, right: Vec<Complex64>) -> Result<Self> {
        make_weights(WeightDescription {
            support: Support::Unilateral,
            core: Some(Core { start_index: core_start, values: core }),
            right_period: Some(right),
            ..Default::default()
        })
    }

    pub fn is_bilateral(&self) -> bool {
        self.support == Support::Bilateral
    }

    /// First index at which a weight is defined (`i64::MIN` for bilateral).
    pub fn first_index(&self) -> i64 {
        match self.support {
            Support::Bilateral => i64::MIN,
            Support::Unilateral => 1,
        }
    }

    pub fn core_start(&self) -> i64 {
        self.core.start_index
    }

    /// One past the last core index; the right period begins here.
    pub fn core_end(&self) -> i64 {
        self.core.start_index + self.core.values.len() as i64
    }

    /// True when both tails are plain repetitions (no generator rule on the left).
    pub fn is_periodic(&self) -> bool {
        !matches!(self.family, Some(Family::DoublingBlocks { .. }))
    }

    pub fn annotation(&self, pick: impl Fn(&Annotation) -> bool) -> Option<Annotation> {
        self.annotations.iter().copied().find(|a| pick(a))
    }

    /// The weight `w_n`; zero outside the index set of a unilateral sequence.
    pub fn weight(&self, n: i64) -> Complex64 {
        if n < self.first_index() {
            return Complex64::new(0.0, 0.0);
        }
        let (cs, ce) = (self.core_start(), self.core_end());
        if n >= ce {
            let r = (n - ce) as usize % self.right_period.len();
            return self.right_period[r];
        }
        if n >= cs {
            return self.core.values[(n - cs) as usize];
        }
        if let Some(Family::DoublingBlocks { t }) = self.family {
            let m = (-n) as u64;
            return if floor_log2(m) % 2 == 0 { real(t) } else { real(1.0 / t) };
        }
        let left = self.left_period.as_ref().expect("bilateral sequence has a left period");
        let d = (cs - 1 - n) as usize % left.len();
        left[left.len() - 1 - d]
    }

    /// `sum ln |w_i|` over `a..=b`, or a zero magnitude if some weight vanishes.
    fn log_sum(&self, a: i64, b: i64) -> Magnitude {
        if a > b {
            return Magnitude::ONE;
        }
        if a < self.first_index() || self.zero_weights.iter().any(|&z| a <= z && z <= b) {
            return Magnitude::ZERO;
        }
        let (cs, ce) = (self.core_start(), self.core_end());
        let mut acc = 0.0;
        // right tail
        if b >= ce {
            let lo = a.max(ce);
            acc += periodic_sum(&self.right_prefix, (lo - ce) as u64, (b - ce) as u64);
        }
        // core
        let (lo, hi) = (a.max(cs), b.min(ce - 1));
        for n in lo..=hi {
            acc += self.core.values[(n - cs) as usize].norm().ln();
        }
        // left tail
        if a < cs {
            let hi = b.min(cs - 1);
            match self.family {
                Some(Family::DoublingBlocks { t }) => {
                    let lt = t.abs().ln();
                    let (m_lo, m_hi) = ((-hi) as u64, (-a) as u64);
                    for j in floor_log2(m_lo)..=floor_log2(m_hi) {
                        let start = (1u64 << j).max(m_lo);
                        let end = ((1u64 << j) * 2 - 1).min(m_hi);
                        let count = (end - start + 1) as f64;
                        acc += if j % 2 == 0 { count * lt } else { -count * lt };
                    }
                }
                _ => {
                    acc += periodic_sum(&self.left_prefix, (cs - 1 - hi) as u64, (cs - 1 - a) as u64);
                }
            }
        }
        Magnitude::from_log(acc)
    }

    /// Geometric mean of `|w|` over the right period, as a log.
    pub fn right_log_gm(&self) -> f64 {
        self.right_prefix[self.right_period.len()] / self.right_period.len() as f64
    }

    /// Geometric mean of `|w|` over the left period, as a log (periodic bilateral only).
    pub fn left_log_gm(&self) -> Option<f64> {
        let left = self.left_period.as_ref()?;
        if !self.is_periodic() {
            return None;
        }
        Some(self.left_prefix[left.len()] / left.len() as f64)
    }

    /// Every distinct modulus the sequence takes, from its finite description.
    pub fn moduli(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.core.values.iter().chain(self.right_period.iter()).map(|w| w.norm()).collect();
        match self.family {
            Some(Family::DoublingBlocks { t }) => {
                out.push(t.abs());
                out.push(1.0 / t.abs());
            }
            _ => out.extend(self.left_period.iter().flatten().map(|w| w.norm())),
        }
        out
    }

    pub fn sup_abs(&self) -> f64 {
        self.moduli().into_iter().fold(0.0, f64::max)
    }

    pub fn inf_abs(&self) -> f64 {
        self.moduli().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Same sequence with every weight multiplied by `lambda`.
    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        if !self.is_periodic() {
            return Err(Error::NotPeriodic("generator family cannot be rescaled".into()));
        }
        let s = |v: &Vec<Complex64>| v.iter().map(|w| w * lambda).collect::<Vec<_>>();
        make_weights(WeightDescription {
            support: self.support,
            left_period: self.left_period.as_ref().map(s),
            core: Some(Core { start_index: self.core.start_index, values: s(&self.core.values) }),
            right_period: Some(s(&self.right_period)),
            ..Default::default()
        })
    }

    /// Weights `v` with `B_v = F_w^{-1}`, that is `v_k = 1 / w_{k-1}`.
    pub fn inverse_backward(&self) -> Result<Self> {
        if !self.invertible {
            return Err(Error::NotInvertible("inverse weights need inf |w_n| > 0 on Z".into()));
        }
        if !self.is_periodic() {
            return Err(Error::NotPeriodic("generator family has no periodic inverse description".into()));
        }
        let r = |v: &Vec<Complex64>| v.iter().map(|w| w.inv()).collect::<Vec<_>>();
        Self::bilateral(
            r(self.left_period.as_ref().unwrap()),
            self.core.start_index + 1,
            r(&self.core.values),
            r(&self.right_period),
        )
    }
}

/// `|w_k * ... * w_{k+n-1}|` in the log domain; the empty product is 1.
pub fn window_product(w: &WeightSequence, k: i64, n: u64) -> Magnitude {
    if n == 0 {
        return Magnitude::ONE;
    }
    w.log_sum(k, k + n as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(w: &WeightSequence, k: i64, n: u64) -> f64 {
        (k..k + n as i64).map(|i| w.weight(i).norm()).product()
    }

    #[test]
    fn theorem_d_weights() {
        let w = WeightSequence::theorem_d(2.0).unwrap();
        assert!(w.invertible);
        assert_eq!(w.weight(-1), real(2.0));
        assert_eq!(w.weight(-100), real(2.0));
        assert_eq!(w.weight(0), real(0.5));
        assert_eq!(w.weight(7), real(0.5));
        assert!((window_product(&w, 0, 3).value() - 0.125).abs() < 1e-15);
        assert_eq!(window_product(&w, 12, 0), Magnitude::ONE);
    }

    #[test]
    fn constant_one_is_identity_weight() {
        let w = WeightSequence::constant(1.0).unwrap();
        assert!(w.invertible);
        for n in -5..5 {
            assert_eq!(w.weight(n), real(1.0));
        }
    }

    #[test]
    fn doubling_block_listing() {
        let w = WeightSequence::doubling_blocks(2.0).unwrap();
        let listed: Vec<f64> = (1..=15).map(|m| w.weight(-m).re).collect();
        let mut expected = vec![2.0, 0.5, 0.5, 2.0, 2.0, 2.0, 2.0];
        expected.extend([0.5; 8]);
        assert_eq!(listed, expected);
        assert_eq!(w.weight(0), real(2.0));
        assert_eq!(w.weight(40), real(2.0));
        assert!((window_product(&w, -3, 3).value() - 0.5).abs() < 1e-15);
        assert!(!w.is_periodic());
        assert_eq!(w.annotations.len(), 3);
    }

    #[test]
    fn log_sums_match_naive_products() {
        let seqs = [
            WeightSequence::doubling_blocks(2.0).unwrap(),
            WeightSequence::bilateral_real(&[2.0, 0.25, 3.0], -2, &[1.5, 0.7, 4.0, 0.1], &[0.5, 1.25]).unwrap(),
            WeightSequence::theorem_d(3.0).unwrap(),
        ];
        for w in &seqs {
            for k in -40..40 {
                for n in 0..30u64 {
                    let got = window_product(w, k, n).value();
                    let want = naive(w, k, n);
                    assert!((got - want).abs() <= 1e-12 * want, "k={k} n={n}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn left_period_ends_just_before_core() {
        let w = WeightSequence::bilateral_real(&[5.0, 7.0], 3, &[1.0], &[2.0, 3.0]).unwrap();
        assert_eq!(w.weight(2).re, 7.0);
        assert_eq!(w.weight(1).re, 5.0);
        assert_eq!(w.weight(0).re, 7.0);
        assert_eq!(w.weight(3).re, 1.0);
        assert_eq!(w.weight(4).re, 2.0);
        assert_eq!(w.weight(5).re, 3.0);
        assert_eq!(w.weight(6).re, 2.0);
    }

    #[test]
    fn zero_core_weight_is_flagged() {
        let w = WeightSequence::bilateral_real(&[2.0], 0, &[1.0, 0.0], &[2.0]).unwrap();
        assert!(!w.invertible);
        assert_eq!(w.zero_weights, vec![1]);
        assert!(window_product(&w, 0, 3).is_zero);
        assert!(!window_product(&w, 2, 3).is_zero);
    }

    #[test]
    fn description_errors() {
        let empty = WeightSequence::bilateral_real(&[], 0, &[], &[1.0]);
        assert!(matches!(empty, Err(Error::EmptyPeriod("left"))));
        let zero_period = WeightSequence::bilateral_real(&[1.0], 0, &[], &[0.0]);
        assert!(zero_period.is_err());
        let uni = WeightSequence::unilateral(0, vec![], vec![real(1.0)]);
        assert!(uni.is_err());
        assert!(WeightSequence::theorem_d(0.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"support":"bilateral","left_period":[[2.0,0.0]],"core":{"start_index":-1,"values":[[1.0,1.0]]},"right_period":[[0.5,0.0],[0.25,0.0]]}"#;
        let w: WeightSequence = serde_json::from_str(src).unwrap();
        assert_eq!(w.weight(-1), Complex64::new(1.0, 1.0));
        assert_eq!(w.weight(1).re, 0.25);
        let again: WeightSequence = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(again.weight(-7), w.weight(-7));
        let fam: WeightSequence = serde_json::from_str(r#"{"family":{"name":"theorem_d","alpha":2.0}}"#).unwrap();
        assert_eq!(fam.weight(-3).re, 2.0);
        let bare: WeightSequence = serde_json::from_str(r#"{"left_period":[0.5],"right_period":[2,[0,1]]}"#).unwrap();
        assert_eq!(bare.weight(-4), real(0.5));
        assert_eq!(bare.weight(1), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn inverse_backward_weights() {
        let w = WeightSequence::bilateral_real(&[2.0, 3.0], -1, &[5.0], &[0.5]).unwrap();
        let v = w.inverse_backward().unwrap();
        for k in -10..10 {
            assert!((v.weight(k) - w.weight(k - 1).inv()).norm() < 1e-15, "k={k}");
        }
    }
}
