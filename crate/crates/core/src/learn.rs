//! Gaussian naive Bayes over the window p-values, stratified k-fold
//! cross-validation and the label-reshuffle null experiment.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::domain::ClassLabel;
use crate::error::{Error, Result};
use crate::rng;
use crate::stats::mean_std;

/// Class order used by every per-class array in this module.
pub const CLASSES: [ClassLabel; 2] = [ClassLabel::Baseline, ClassLabel::Upset];

fn class_slot(label: ClassLabel) -> usize {
    match label {
        ClassLabel::Baseline => 0,
        ClassLabel::Upset => 1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnbModel {
    priors: [f64; 2],
    means: [Vec<f64>; 2],
    variances: [Vec<f64>; 2],
    var_floor: f64,
}

impl GnbModel {
    pub fn dim(&self) -> usize {
        self.means[0].len()
    }

    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    pub fn means(&self, class: ClassLabel) -> &[f64] {
        &self.means[class_slot(class)]
    }

    pub fn variances(&self, class: ClassLabel) -> &[f64] {
        &self.variances[class_slot(class)]
    }

    pub fn var_floor(&self) -> f64 {
        self.var_floor
    }

    /// Replaces the priors with `weights` normalized to sum to one.
    pub fn set_priors(&mut self, weights: [f64; 2]) -> Result<()> {
        let total = weights[0] + weights[1];
        if !(weights[0] > 0.0 && weights[1] > 0.0 && total.is_finite()) {
            return Err(Error::InvalidConfig(alloc::format!(
                "priors must be positive and finite, got {weights:?}"
            )));
        }
        self.priors = [weights[0] / total, weights[1] / total];
        Ok(())
    }

    /// Builds a model from explicit parameters (variances are floored).
    pub fn from_parameters(
        priors: [f64; 2],
        means: [Vec<f64>; 2],
        variances: [Vec<f64>; 2],
        var_floor: f64,
    ) -> Result<Self> {
        let d = means[0].len();
        for v in means.iter().chain(&variances) {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
        }
        let variances = variances.map(|v| v.into_iter().map(|x| x.max(var_floor)).collect());
        let mut model = GnbModel {
            priors,
            means,
            variances,
            var_floor,
        };
        model.set_priors(priors)?;
        Ok(model)
    }

    /// Unnormalized log posterior per class, `log prior + sum log N(x_i)`.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> Result<[f64; 2]> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(core::array::from_fn(|c| {
            let mut ll = libm::log(self.priors[c]);
            for ((&xi, &mu), &var) in x.iter().zip(&self.means[c]).zip(&self.variances[c]) {
                let d = xi - mu;
                ll -= 0.5 * (libm::log(2.0 * core::f64::consts::PI * var) + d * d / var);
            }
            ll
        }))
    }

    /// Posterior per class in [`CLASSES`] order.
    pub fn predict_proba(&self, x: &[f64]) -> Result<[f64; 2]> {
        let jll = self.joint_log_likelihood(x)?;
        let m = jll[0].max(jll[1]);
        let e = jll.map(|l| libm::exp(l - m));
        let s = e[0] + e[1];
        Ok(e.map(|v| v / s))
    }

    /// Argmax posterior; exact ties go to `Baseline`.
    pub fn predict(&self, x: &[f64]) -> Result<ClassLabel> {
        let jll = self.joint_log_likelihood(x)?;
        Ok(if jll[1] > jll[0] {
            ClassLabel::Upset
        } else {
            ClassLabel::Baseline
        })
    }
}

fn check_rows<R: AsRef<[f64]>>(x: &[R]) -> Result<usize> {
    let d = x.first().map_or(0, |r| r.as_ref().len());
    for r in x {
        if r.as_ref().len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: r.as_ref().len(),
            });
        }
    }
    Ok(d)
}

/// Fits per-class means and population variances. Variances are floored at
/// `max(1e-9 * largest overall feature variance, 1e-12)`.
pub fn gnb_fit<R: AsRef<[f64]>>(x: &[R], y: &[ClassLabel]) -> Result<GnbModel> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let d = check_rows(x)?;
    let mut counts = [0usize; 2];
    for &label in y {
        counts[class_slot(label)] += 1;
    }
    for (c, &n) in counts.iter().enumerate() {
        if n == 0 {
            return Err(Error::MissingClass(CLASSES[c].as_str()));
        }
    }

    let mut overall_max_var: f64 = 0.0;
    for j in 0..d {
        let col: Vec<f64> = x.iter().map(|r| r.as_ref()[j]).collect();
        if let Some((_, sd)) = mean_std(&col) {
            overall_max_var = overall_max_var.max(sd * sd);
        }
    }
    let var_floor = (1e-9 * overall_max_var).max(1e-12);

    let mut means = [vec![0.0; d], vec![0.0; d]];
    let mut variances = [vec![0.0; d], vec![0.0; d]];
    for c in 0..2 {
        let rows: Vec<&[f64]> = x
            .iter()
            .zip(y)
            .filter(|(_, &l)| class_slot(l) == c)
            .map(|(r, _)| r.as_ref())
            .collect();
        for j in 0..d {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let (m, sd) = mean_std(&col).unwrap_or((0.0, 0.0));
            means[c][j] = m;
            variances[c][j] = (sd * sd).max(var_floor);
        }
    }
    let n = y.len() as f64;
    Ok(GnbModel {
        priors: [counts[0] as f64 / n, counts[1] as f64 / n],
        means,
        variances,
        var_floor,
    })
}

/// Fold index in `0..k` for every example. Each class is shuffled with the seed
/// and dealt round-robin, continuing where the previous class stopped, so every
/// fold gets the floor or ceiling of its proportional share of each class.
pub fn stratified_kfold(labels: &[ClassLabel], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if k > labels.len() {
        return Err(Error::KTooLarge { k, n: labels.len() });
    }
    let mut rng = rng::seeded(seed);
    let mut folds = vec![0; labels.len()];
    let mut next = 0;
    for class in CLASSES {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(folds)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auroc: f64,
}

/// Probability that a random positive outscores a random negative, ties counting
/// one half. `0.5` when either class is absent.
pub fn auroc(scores: &[f64], labels: &[ClassLabel]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch(scores.len(), labels.len()));
    }
    let pos: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, l)| l.is_upset())
        .map(|(&s, _)| s)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, l)| !l.is_upset())
        .map(|(&s, _)| s)
        .collect();
    if pos.is_empty() || neg.is_empty() {
        return Ok(0.5);
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos.len() as f64 * neg.len() as f64))
}

/// Metrics with `Upset` as the positive class. `scores` are posterior(Upset).
pub fn classification_metrics(
    predictions: &[ClassLabel],
    scores: &[f64],
    labels: &[ClassLabel],
) -> Result<Metrics> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch(predictions.len(), labels.len()));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p.is_upset(), l.is_upset()) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(Metrics {
        accuracy: ratio(tp + tn, labels.len()),
        precision,
        recall,
        f1,
        auroc: auroc(scores, labels)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    /// Computed on the pooled out-of-fold predictions.
    pub metrics: Metrics,
    pub per_fold: Vec<Metrics>,
    pub fold_assignment: Vec<usize>,
    /// Out-of-fold posterior(Upset), aligned with the input.
    pub posteriors: Vec<f64>,
    pub predictions: Vec<ClassLabel>,
    pub k: usize,
    pub seed: u64,
}

pub fn cross_validate<R: AsRef<[f64]>>(
    x: &[R],
    y: &[ClassLabel],
    k: usize,
    seed: u64,
) -> Result<CvReport> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if k < 2 {
        return Err(Error::InvalidConfig("cross-validation needs k >= 2".into()));
    }
    check_rows(x)?;
    let folds = stratified_kfold(y, k, seed)?;
    let mut posteriors = vec![0.0; y.len()];
    let mut predictions = vec![ClassLabel::Baseline; y.len()];
    let mut per_fold = Vec::with_capacity(k);
    for fold in 0..k {
        let (train_x, train_y): (Vec<&[f64]>, Vec<ClassLabel>) = (0..y.len())
            .filter(|&i| folds[i] != fold)
            .map(|i| (x[i].as_ref(), y[i]))
            .unzip();
        let model = gnb_fit(&train_x, &train_y)?;
        let test: Vec<usize> = (0..y.len()).filter(|&i| folds[i] == fold).collect();
        for &i in &test {
            posteriors[i] = model.predict_proba(x[i].as_ref())?[1];
            predictions[i] = model.predict(x[i].as_ref())?;
        }
        per_fold.push(classification_metrics(
            &pick(&predictions, &test),
            &pick(&posteriors, &test),
            &pick(y, &test),
        )?);
    }
    Ok(CvReport {
        metrics: classification_metrics(&predictions, &posteriors, y)?,
        per_fold,
        fold_assignment: folds,
        posteriors,
        predictions,
        k,
        seed,
    })
}

fn pick<T: Copy>(values: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| values[i]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullReport {
    pub rounds: Vec<Metrics>,
    pub mean: Metrics,
    pub std: Metrics,
    pub seed: u64,
}

fn aggregate(rounds: &[Metrics]) -> Result<(Metrics, Metrics)> {
    let field = |f: fn(&Metrics) -> f64| {
        let v: Vec<f64> = rounds.iter().map(f).collect();
        mean_std(&v).ok_or(Error::EmptyAggregate)
    };
    let acc = field(|m| m.accuracy)?;
    let pre = field(|m| m.precision)?;
    let rec = field(|m| m.recall)?;
    let f1 = field(|m| m.f1)?;
    let auc = field(|m| m.auroc)?;
    Ok((
        Metrics { accuracy: acc.0, precision: pre.0, recall: rec.0, f1: f1.0, auroc: auc.0 },
        Metrics { accuracy: acc.1, precision: pre.1, recall: rec.1, f1: f1.1, auroc: auc.1 },
    ))
}

/// Cross-validates `rounds` times, each time on a uniformly permuted copy of the
/// labels, and aggregates the pooled metrics.
pub fn reshuffle_labels_experiment<R: AsRef<[f64]>>(
    x: &[R],
    y: &[ClassLabel],
    k: usize,
    rounds: usize,
    seed: u64,
) -> Result<NullReport> {
    if rounds == 0 {
        return Err(Error::EmptyAggregate);
    }
    let mut per_round = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let round_seed = rng::derive_seed(seed, r as u64);
        let mut shuffled = y.to_vec();
        shuffled.shuffle(&mut rng::stream(round_seed, 1));
        per_round.push(cross_validate(x, &shuffled, k, round_seed)?.metrics);
    }
    let (mean, std) = aggregate(&per_round)?;
    Ok(NullReport {
        rounds: per_round,
        mean,
        std,
        seed,
    })
}
