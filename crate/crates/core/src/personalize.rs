//! Edge support-vector selection.
//!
//! A support vector is on the surface of the local data when (almost) all of
//! its k nearest neighbours fall on one side of the plane through it whose
//! normal is the sum of the unit vectors toward those neighbours. Interior
//! support vectors are dropped from the client's model.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::kernel::{dot, sq_dist};
use crate::ocsvm::OcsvmModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeConfig {
    /// Neighbour count.
    pub k: usize,
    /// Tolerated fraction of neighbours on the far side of the plane.
    pub gamma: f64,
}

impl Default for EdgeConfig {
    fn default() -> Self {
        Self { k: 10, gamma: 0.05 }
    }
}

impl EdgeConfig {
    pub fn validate(&self, n_points: usize) -> Result<()> {
        if self.k == 0 || self.k >= n_points {
            return Err(Error::InvalidParameter(format!(
                "edge k must satisfy 1 <= k < {n_points}, got {}",
                self.k
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "edge gamma must lie in (0, 0.5), got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeVerdict {
    pub sv_index: usize,
    /// Fraction of neighbours with a non-negative dot product.
    pub ratio: f64,
    pub is_edge: bool,
    /// The normal vector vanished (balanced neighbourhood).
    pub degenerate: bool,
}

/// Indices of the `k` nearest points to `points[query]`, excluding the query.
/// Ties are broken by the lower index.
pub fn knn(points: &[Vec<f64>], query: usize, k: usize) -> Result<Vec<usize>> {
    if query >= points.len() {
        return Err(Error::InvalidParameter(format!(
            "query index {query} out of range for {} points",
            points.len()
        )));
    }
    if k == 0 || k >= points.len() {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < {}, got {k}",
            points.len()
        )));
    }
    let q = &points[query];
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(points.len() - 1);
    for (i, p) in points.iter().enumerate() {
        if i != query {
            check_len(q.len(), p.len())?;
            order.push((sq_dist(q, p), i));
        }
    }
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(order.into_iter().take(k).map(|(_, i)| i).collect())
}

/// Normal of the tangent plane at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct NormVector {
    pub direction: Vec<f64>,
    /// Unit vectors toward each neighbour; `None` for a neighbour that
    /// coincides with the point.
    pub units: Vec<Option<Vec<f64>>>,
    pub coincident: usize,
}

/// Sum of unit vectors from `x` toward each neighbour. Coincident neighbours
/// have no direction; they are skipped and counted.
pub fn norm_vector<P: AsRef<[f64]>>(x: &[f64], neighbors: &[P]) -> Result<NormVector> {
    let mut direction = vec![0.0; x.len()];
    let mut units = Vec::with_capacity(neighbors.len());
    let mut coincident = 0;
    for nb in neighbors {
        let nb = nb.as_ref();
        check_len(x.len(), nb.len())?;
        let diff: Vec<f64> = nb.iter().zip(x).map(|(a, b)| a - b).collect();
        let len = dot(&diff, &diff).sqrt();
        if len == 0.0 {
            coincident += 1;
            units.push(None);
            continue;
        }
        let unit: Vec<f64> = diff.iter().map(|d| d / len).collect();
        for (acc, u) in direction.iter_mut().zip(&unit) {
            *acc += u;
        }
        units.push(Some(unit));
    }
    Ok(NormVector {
        direction,
        units,
        coincident,
    })
}

/// Fraction of neighbours whose unit direction has a non-negative dot product
/// with `v`. A coincident neighbour lies on the plane and counts.
pub fn edge_ratio<P: AsRef<[f64]>>(x: &[f64], neighbors: &[P], v: &[f64]) -> Result<f64> {
    if neighbors.is_empty() {
        return Err(Error::EmptyInput("neighbour set"));
    }
    check_len(x.len(), v.len())?;
    let mut on_side = 0usize;
    for nb in neighbors {
        let nb = nb.as_ref();
        check_len(x.len(), nb.len())?;
        let diff: Vec<f64> = nb.iter().zip(x).map(|(a, b)| a - b).collect();
        let len = dot(&diff, &diff).sqrt();
        let theta = if len == 0.0 { 0.0 } else { dot(&diff, v) / len };
        if theta >= 0.0 {
            on_side += 1;
        }
    }
    Ok(on_side as f64 / neighbors.len() as f64)
}

/// Classifies `points[sv_index]` against its neighbours among `points`.
pub fn classify_edge(points: &[Vec<f64>], sv_index: usize, cfg: &EdgeConfig) -> Result<EdgeVerdict> {
    cfg.validate(points.len())?;
    let neighbors: Vec<&[f64]> = knn(points, sv_index, cfg.k)?
        .into_iter()
        .map(|i| points[i].as_slice())
        .collect();
    let x = &points[sv_index];
    let nv = norm_vector(x, &neighbors)?;
    let ratio = edge_ratio(x, &neighbors, &nv.direction)?;
    let degenerate = dot(&nv.direction, &nv.direction).sqrt() < 1e-9 * cfg.k as f64;
    Ok(EdgeVerdict {
        sv_index,
        ratio,
        // 1e-12 absorbs the rounding of 1 - gamma
        is_edge: !degenerate && ratio >= 1.0 - cfg.gamma - 1e-12,
        degenerate,
    })
}

#[derive(Debug, Clone)]
pub struct Personalized {
    pub model: OcsvmModel,
    /// One verdict per original support vector, in model order. `sv_index`
    /// is the row in the local training set.
    pub verdicts: Vec<EdgeVerdict>,
    /// Every support vector was interior; the input model was returned as is.
    pub fell_back: bool,
}

impl Personalized {
    pub fn n_edge(&self) -> usize {
        self.verdicts.iter().filter(|v| v.is_edge).count()
    }
}

/// Edge verdicts for every support vector of `model`, with neighbours drawn
/// from all of `local_samples`.
pub fn edge_verdicts(model: &OcsvmModel, local_samples: &[Vec<f64>], cfg: &EdgeConfig) -> Result<Vec<EdgeVerdict>> {
    cfg.validate(local_samples.len())?;
    model
        .support_points()
        .iter()
        .map(|sv| {
            let row = local_samples
                .iter()
                .position(|x| x == sv)
                .ok_or_else(|| Error::InvalidParameter("support vector not found in local samples".into()))?;
            classify_edge(local_samples, row, cfg)
        })
        .collect()
}

/// Keeps only edge support vectors and rescales their multipliers to the
/// original total. The offset is then re-chosen on the local training set so
/// the pruned model rejects as many training samples as the input model did.
/// A model whose support vectors are all edge is returned unchanged.
pub fn personalize_model(model: &OcsvmModel, local_samples: &[Vec<f64>], cfg: &EdgeConfig) -> Result<Personalized> {
    let verdicts = edge_verdicts(model, local_samples, cfg)?;
    let keep: Vec<usize> = (0..verdicts.len()).filter(|&i| verdicts[i].is_edge).collect();
    if keep.is_empty() || keep.len() == verdicts.len() {
        return Ok(Personalized {
            model: model.clone(),
            fell_back: keep.is_empty(),
            verdicts,
        });
    }
    let total: f64 = model.alphas().iter().sum();
    let kept_total: f64 = keep.iter().map(|&i| model.alphas()[i]).sum();
    let scale = total / kept_total;
    let points: Vec<Vec<f64>> = keep.iter().map(|&i| model.support_points()[i].clone()).collect();
    let alphas: Vec<f64> = keep.iter().map(|&i| model.alphas()[i] * scale).collect();

    let unshifted = OcsvmModel::new(points, alphas, 0.0, *model.kernel(), model.nu())?;
    let mut rejected = 0;
    let mut scores = Vec::with_capacity(local_samples.len());
    for x in local_samples {
        if model.decision(x)? < 0.0 {
            rejected += 1;
        }
        scores.push(unshifted.decision(x)?);
    }
    scores.sort_by(f64::total_cmp);
    let rho = match rejected {
        0 => scores[0],
        r => 0.5 * (scores[r - 1] + scores[r]),
    };
    let model = unshifted.with_rho(rho)?;
    Ok(Personalized {
        model,
        verdicts,
        fell_back: false,
    })
}
