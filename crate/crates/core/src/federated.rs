//! Round-based simulation of federated one-class SVM training with
//! median-loss client selection.
//!
//! Clients exchange length-`n` coefficient vectors `w = a K`, so every client
//! must hold the same number of training samples. Within a round the received
//! global `w` drives the first local epoch; later epochs use the client's own
//! recomputed `w`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::kernel::{kernel_matrix, median, Bandwidth, KernelConfig, KernelMatrix};
use crate::ocsvm::{
    compute_w, gradient_step, init_alpha, local_loss, project_feasible, AlphaVector, CoefficientVector,
    Feasibility, OcsvmModel, TrainConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AggregationPolicy {
    /// Average only the clients whose loss is at or below the round median.
    #[default]
    ConditionalMedian,
    /// Plain federated averaging over every client.
    PlainAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundConfig {
    /// Local epochs per round.
    pub epochs: usize,
    pub rounds: usize,
}

impl RoundConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidParameter("epochs per round must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClientState {
    pub client_id: usize,
    samples: Vec<Vec<f64>>,
    kernel_cfg: KernelConfig,
    kernel: KernelMatrix,
    alpha: AlphaVector,
    w: CoefficientVector,
    last_loss: f64,
}

impl ClientState {
    /// Builds the Gram matrix and starts from the uniform multipliers.
    pub fn new(client_id: usize, samples: Vec<Vec<f64>>, kernel_cfg: KernelConfig) -> Result<Self> {
        let kernel = kernel_matrix(&samples, &kernel_cfg)?;
        let alpha = init_alpha(kernel.n())?;
        let w = compute_w(&alpha, &kernel)?;
        let last_loss = local_loss(&alpha, &kernel)?;
        Ok(Self {
            client_id,
            samples,
            kernel_cfg,
            kernel,
            alpha,
            w,
            last_loss,
        })
    }

    pub fn n(&self) -> usize {
        self.kernel.n()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn kernel_cfg(&self) -> &KernelConfig {
        &self.kernel_cfg
    }

    pub fn kernel(&self) -> &KernelMatrix {
        &self.kernel
    }

    pub fn alpha(&self) -> &AlphaVector {
        &self.alpha
    }

    pub fn set_alpha(&mut self, alpha: AlphaVector) -> Result<()> {
        check_len(self.n(), alpha.len())?;
        self.w = compute_w(&alpha, &self.kernel)?;
        self.last_loss = local_loss(&alpha, &self.kernel)?;
        self.alpha = alpha;
        Ok(())
    }

    pub fn w(&self) -> &CoefficientVector {
        &self.w
    }

    pub fn last_loss(&self) -> f64 {
        self.last_loss
    }

    /// Detector built from the current multipliers.
    pub fn model(&self, cfg: &TrainConfig) -> Result<OcsvmModel> {
        OcsvmModel::from_alpha(&self.samples, &self.alpha, &self.kernel, self.kernel_cfg, cfg)
    }
}

/// Runs `epochs` local epochs starting from the received global coefficients.
/// Returns the client's new `w` and its loss; the client keeps its multipliers
/// for the next round.
pub fn client_update(
    client: &mut ClientState,
    w_global: &CoefficientVector,
    cfg: &TrainConfig,
    epochs: usize,
) -> Result<(CoefficientVector, f64)> {
    let n = client.n();
    check_len(n, w_global.len())?;
    let cap = cfg.cap(n);
    let mut alpha = client.alpha.as_slice().to_vec();
    let mut w = w_global.as_slice().to_vec();
    for _ in 0..epochs {
        gradient_step(&mut alpha, &w, cfg.eta, cap);
        if cfg.feasibility == Feasibility::BoxSimplex {
            project_feasible(&mut alpha, cap)?;
        }
        w = client.kernel.mul_vec(&alpha)?;
    }
    client.alpha = AlphaVector::new(alpha);
    client.w = CoefficientVector::new(w);
    client.last_loss = local_loss(&client.alpha, &client.kernel)?;
    Ok((client.w.clone(), client.last_loss))
}

/// Indices whose loss is at or below the median. For an even count the
/// median is the mean of the two middle values; ties are all kept.
pub fn select_by_median(losses: &[f64]) -> Result<Vec<usize>> {
    if losses.is_empty() {
        return Err(Error::EmptyInput("loss vector"));
    }
    if let Some(l) = losses.iter().find(|l| !l.is_finite()) {
        return Err(Error::InvalidParameter(format!("loss {l} is not finite")));
    }
    let mut sorted = losses.to_vec();
    let m = median(&mut sorted);
    Ok((0..losses.len()).filter(|&i| losses[i] <= m).collect())
}

/// Coordinate-wise mean over the selected vectors.
pub fn aggregate(ws: &[CoefficientVector], selected: &[usize]) -> Result<CoefficientVector> {
    let first = *selected.first().ok_or(Error::EmptyInput("client selection"))?;
    let n = ws
        .get(first)
        .ok_or_else(|| Error::InvalidParameter(format!("selected index {first} out of range")))?
        .len();
    let mut sum = vec![0.0; n];
    for &i in selected {
        let w = ws
            .get(i)
            .ok_or_else(|| Error::InvalidParameter(format!("selected index {i} out of range")))?;
        check_len(n, w.len())?;
        for (s, v) in sum.iter_mut().zip(w.as_slice()) {
            *s += v;
        }
    }
    let count = selected.len() as f64;
    Ok(CoefficientVector::new(sum.into_iter().map(|s| s / count).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based round number.
    pub round: usize,
    pub client_ids: Vec<usize>,
    pub losses: Vec<f64>,
    pub selected: Vec<usize>,
    pub mean_loss: f64,
    pub median_loss: f64,
}

impl RoundRecord {
    pub fn is_selected(&self, client_id: usize) -> bool {
        self.selected.contains(&client_id)
    }
}

#[derive(Debug, Clone)]
pub struct ServerState {
    pub round: usize,
    pub global_w: CoefficientVector,
    pub policy: AggregationPolicy,
    pub history: Vec<RoundRecord>,
}

impl ServerState {
    /// Fresh server for clients with `n` samples each; the global
    /// coefficients start at zero.
    pub fn new(n: usize, policy: AggregationPolicy) -> Self {
        Self {
            round: 0,
            global_w: CoefficientVector::zeros(n),
            policy,
            history: Vec::new(),
        }
    }
}

fn check_equal_n(clients: &[ClientState], n: usize) -> Result<()> {
    for c in clients {
        if c.n() != n {
            return Err(Error::UnequalClients {
                client_id: c.client_id,
                expected: n,
                actual: c.n(),
            });
        }
    }
    Ok(())
}

/// One communication round: broadcast, local updates (in parallel), selection,
/// aggregation.
pub fn run_round(
    server: &mut ServerState,
    clients: &mut [ClientState],
    cfg: &TrainConfig,
    rcfg: &RoundConfig,
) -> Result<()> {
    if clients.is_empty() {
        return Err(Error::EmptyInput("client list"));
    }
    check_equal_n(clients, server.global_w.len())?;
    let global = &server.global_w;
    let updates: Vec<(CoefficientVector, f64)> = clients
        .par_iter_mut()
        .map(|c| client_update(c, global, cfg, rcfg.epochs))
        .collect::<Result<_>>()?;
    let (ws, losses): (Vec<_>, Vec<_>) = updates.into_iter().unzip();
    let positions = match server.policy {
        AggregationPolicy::ConditionalMedian => select_by_median(&losses)?,
        AggregationPolicy::PlainAverage => (0..clients.len()).collect(),
    };
    server.global_w = aggregate(&ws, &positions)?;
    server.round += 1;
    let mut sorted = losses.clone();
    server.history.push(RoundRecord {
        round: server.round,
        client_ids: clients.iter().map(|c| c.client_id).collect(),
        mean_loss: losses.iter().sum::<f64>() / losses.len() as f64,
        median_loss: median(&mut sorted),
        selected: positions.iter().map(|&i| clients[i].client_id).collect(),
        losses,
    });
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub models: Vec<OcsvmModel>,
    pub clients: Vec<ClientState>,
    pub server: ServerState,
}

/// Full protocol: `rcfg.rounds` rounds, then one detector per client from its
/// final multipliers. Client ids are positions in `clients_data`.
pub fn run_training(
    clients_data: &[Vec<Vec<f64>>],
    bandwidth: Bandwidth,
    cfg: &TrainConfig,
    rcfg: &RoundConfig,
    policy: AggregationPolicy,
) -> Result<TrainingOutcome> {
    cfg.validate()?;
    rcfg.validate()?;
    let first = clients_data.first().ok_or(Error::EmptyInput("client list"))?;
    let n = first.len();
    for (id, data) in clients_data.iter().enumerate() {
        if data.is_empty() {
            return Err(Error::EmptyInput("client sample matrix"));
        }
        if data.len() != n {
            return Err(Error::UnequalClients {
                client_id: id,
                expected: n,
                actual: data.len(),
            });
        }
    }
    let mut clients = clients_data
        .iter()
        .enumerate()
        .map(|(id, data)| ClientState::new(id, data.clone(), bandwidth.resolve(data)?))
        .collect::<Result<Vec<_>>>()?;
    let mut server = ServerState::new(n, policy);
    for _ in 0..rcfg.rounds {
        run_round(&mut server, &mut clients, cfg, rcfg)?;
    }
    let models = clients.iter().map(|c| c.model(cfg)).collect::<Result<Vec<_>>>()?;
    Ok(TrainingOutcome {
        models,
        clients,
        server,
    })
}

/// Writes `round,client_id,loss,selected` rows, one per client per round.
pub fn write_history_csv<W: Write>(history: &[RoundRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["round", "client_id", "loss", "selected"])?;
    for record in history {
        for (id, loss) in record.client_ids.iter().zip(&record.losses) {
            writer.write_record([
                record.round.to_string(),
                id.to_string(),
                loss.to_string(),
                u8::from(record.is_selected(*id)).to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}
