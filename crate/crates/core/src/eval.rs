//! Confusion counts and F-score. Healthy is the positive class.

use serde::{Deserialize, Serialize};

use crate::data::Label;
use crate::error::{check_len, Result};
use crate::ocsvm::Sign;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn confusion(predictions: &[Sign], truths: &[Label]) -> Result<Confusion> {
    check_len(predictions.len(), truths.len())?;
    let mut c = Confusion::default();
    for (p, t) in predictions.iter().zip(truths) {
        match (p, t) {
            (Sign::Positive, Label::Healthy) => c.tp += 1,
            (Sign::Positive, Label::Damaged) => c.fp += 1,
            (Sign::Negative, Label::Healthy) => c.fn_ += 1,
            (Sign::Negative, Label::Damaged) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Harmonic mean of precision and recall; 0 whenever either is undefined or
/// both are zero.
pub fn f_score(c: &Confusion) -> f64 {
    let (p, r) = (c.precision(), c.recall());
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}
