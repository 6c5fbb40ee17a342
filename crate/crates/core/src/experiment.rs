//! Config-driven experiment runner: ingest, preprocess, split, federated
//! training, optional personalization, per-client evaluation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{load_events_csv, preprocess, split_train_test, synth_generate, Event, Label, SynthConfig};
use crate::error::Error;
use crate::eval::{confusion, f_score, Confusion};
use crate::federated::{run_training, write_history_csv, AggregationPolicy, RoundConfig, RoundRecord};
use crate::kernel::Bandwidth;
use crate::ocsvm::{Feasibility, OcsvmModel, Sign, TrainConfig};
use crate::personalize::{edge_verdicts, personalize_model, EdgeConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    Csv(PathBuf),
    Synth(SynthConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Preprocess {
    /// Features are used as given.
    #[default]
    None,
    /// Each row is a raw signal; replaced by its normalized magnitude spectrum.
    Spectrum,
}

fn default_nu() -> f64 {
    TrainConfig::default().nu
}
fn default_eta() -> f64 {
    TrainConfig::default().eta
}
fn default_epsilon() -> f64 {
    TrainConfig::default().epsilon
}
fn default_epochs() -> usize {
    50
}
fn default_rounds() -> usize {
    40
}
fn default_true() -> bool {
    true
}
fn default_edge_k() -> usize {
    EdgeConfig::default().k
}
fn default_edge_gamma() -> f64 {
    EdgeConfig::default().gamma
}
fn default_train_fraction() -> f64 {
    0.8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataSource,
    #[serde(default)]
    pub preprocess: Preprocess,
    /// Kernel bandwidth; per-client median heuristic when absent.
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub feasibility: Feasibility,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default)]
    pub policy: AggregationPolicy,
    #[serde(default = "default_true")]
    pub personalize: bool,
    #[serde(default = "default_edge_k")]
    pub edge_k: usize,
    #[serde(default = "default_edge_gamma")]
    pub edge_gamma: f64,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn with_data(data: DataSource) -> Self {
        Self {
            data,
            preprocess: Preprocess::None,
            sigma: None,
            nu: default_nu(),
            eta: default_eta(),
            epsilon: default_epsilon(),
            feasibility: Feasibility::default(),
            epochs: default_epochs(),
            rounds: default_rounds(),
            policy: AggregationPolicy::default(),
            personalize: true,
            edge_k: default_edge_k(),
            edge_gamma: default_edge_gamma(),
            train_fraction: default_train_fraction(),
            seed: 0,
            output_dir: None,
        }
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path.as_ref()).map_err(|e| ExperimentError::config(e.into()))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ExperimentError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ExperimentError::config(e.into()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            nu: self.nu,
            eta: self.eta,
            epsilon: self.epsilon,
            max_epochs: TrainConfig::default().max_epochs,
            feasibility: self.feasibility,
        }
    }

    pub fn round_config(&self) -> RoundConfig {
        RoundConfig {
            epochs: self.epochs,
            rounds: self.rounds,
        }
    }

    pub fn edge_config(&self) -> EdgeConfig {
        EdgeConfig {
            k: self.edge_k,
            gamma: self.edge_gamma,
        }
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.sigma.map_or(Bandwidth::MedianHeuristic, Bandwidth::Fixed)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let check = || -> crate::Result<()> {
            self.train_config().validate()?;
            self.round_config().validate()?;
            if self.rounds == 0 {
                return Err(Error::InvalidParameter("rounds must be at least 1".into()));
            }
            if let Some(s) = self.sigma {
                crate::kernel::KernelConfig::new(s)?;
            }
            if !(self.edge_gamma > 0.0 && self.edge_gamma < 0.5) || self.edge_k == 0 {
                return Err(Error::InvalidParameter("edge_k must be >= 1 and edge_gamma in (0, 0.5)".into()));
            }
            if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
                return Err(Error::InvalidParameter("train_fraction must lie in (0, 1)".into()));
            }
            if let DataSource::Synth(s) = &self.data {
                s.validate()?;
            }
            Ok(())
        };
        check().map_err(ExperimentError::config)
    }
}

/// Pipeline stage that failed; selects the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Data,
    Training,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Config => 1,
            Stage::Data => 2,
            Stage::Training => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Data => "data",
            Stage::Training => "training",
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{} stage failed: {source}", stage.name())]
pub struct ExperimentError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl ExperimentError {
    fn config(source: Error) -> Self {
        Self { stage: Stage::Config, source }
    }
    fn data(source: Error) -> Self {
        Self { stage: Stage::Data, source }
    }
    fn training(source: Error) -> Self {
        Self { stage: Stage::Training, source }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientMetrics {
    pub client_id: usize,
    pub f_score: f64,
    pub precision: f64,
    pub recall: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub n_support_vectors: usize,
    pub n_edge_support_vectors: usize,
}

impl ClientMetrics {
    fn new(client_id: usize, c: Confusion, n_support_vectors: usize, n_edge_support_vectors: usize) -> Self {
        Self {
            client_id,
            f_score: f_score(&c),
            precision: c.precision(),
            recall: c.recall(),
            tp: c.tp,
            fp: c.fp,
            fn_: c.fn_,
            tn: c.tn,
            n_support_vectors,
            n_edge_support_vectors,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean_f: f64,
    pub std_f: f64,
}

impl Summary {
    /// Mean and population standard deviation.
    pub fn of(scores: &[f64]) -> Self {
        if scores.is_empty() {
            return Self { mean_f: 0.0, std_f: 0.0 };
        }
        let n = scores.len() as f64;
        let mean_f = scores.iter().sum::<f64>() / n;
        let var = scores.iter().map(|f| (f - mean_f) * (f - mean_f)).sum::<f64>() / n;
        Self { mean_f, std_f: var.sqrt() }
    }
}

/// Serialized as the metrics JSON; `history` goes to the convergence CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub config_echo: ExperimentConfig,
    pub per_client: Vec<ClientMetrics>,
    pub summary: Summary,
    pub rounds_run: usize,
    #[serde(skip)]
    pub history: Vec<RoundRecord>,
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics are always serializable")
    }

    /// Writes `metrics.json` and `convergence.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> crate::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("metrics.json"), self.to_json() + "\n")?;
        write_history_csv(&self.history, fs::File::create(dir.join("convergence.csv"))?)
    }
}

pub fn load_events(cfg: &ExperimentConfig) -> Result<Vec<Event>, ExperimentError> {
    let events = match &cfg.data {
        DataSource::Csv(path) => load_events_csv(path),
        DataSource::Synth(s) => synth_generate(s),
    }
    .map_err(ExperimentError::data)?;
    match cfg.preprocess {
        Preprocess::None => Ok(events),
        Preprocess::Spectrum => events
            .into_iter()
            .map(|e| Ok(Event { features: preprocess(&e.features)?, ..e }))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(ExperimentError::data),
    }
}

/// Groups events by client id (ascending) into per-client lists.
fn by_client(events: Vec<Event>) -> Vec<(usize, Vec<Event>)> {
    let mut map = std::collections::BTreeMap::<usize, Vec<Event>>::new();
    for e in events {
        map.entry(e.client_id).or_default().push(e);
    }
    map.into_iter().collect()
}

fn evaluate(model: &OcsvmModel, test: &[Event]) -> crate::Result<Confusion> {
    let predictions = test
        .iter()
        .map(|e| model.classify(&e.features))
        .collect::<crate::Result<Vec<Sign>>>()?;
    let truths: Vec<Label> = test.iter().map(|e| e.label).collect();
    confusion(&predictions, &truths)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<MetricsReport, ExperimentError> {
    cfg.validate()?;
    let events = load_events(cfg)?;
    let (train, test) = split_train_test(&events, cfg.train_fraction, cfg.seed).map_err(ExperimentError::data)?;
    let train = by_client(train);
    let mut test_by_client = by_client(test).into_iter().collect::<std::collections::BTreeMap<_, _>>();
    let client_ids: Vec<usize> = train.iter().map(|(id, _)| *id).collect();
    let data: Vec<Vec<Vec<f64>>> = train
        .into_iter()
        .map(|(_, evs)| evs.into_iter().map(|e| e.features).collect())
        .collect();

    let tcfg = cfg.train_config();
    let outcome = run_training(&data, cfg.bandwidth(), &tcfg, &cfg.round_config(), cfg.policy)
        .map_err(ExperimentError::training)?;

    let ecfg = cfg.edge_config();
    let mut per_client = Vec::with_capacity(client_ids.len());
    for (pos, model) in outcome.models.iter().enumerate() {
        let local = &data[pos];
        let mut step = || -> crate::Result<ClientMetrics> {
            let (model, n_edge) = if cfg.personalize {
                let p = personalize_model(model, local, &ecfg)?;
                let n_edge = p.n_edge();
                (p.model, n_edge)
            } else {
                let n_edge = edge_verdicts(model, local, &ecfg)?.iter().filter(|v| v.is_edge).count();
                (model.clone(), n_edge)
            };
            let test = test_by_client.remove(&client_ids[pos]).unwrap_or_default();
            let c = evaluate(&model, &test)?;
            Ok(ClientMetrics::new(client_ids[pos], c, outcome.models[pos].n_support(), n_edge))
        };
        per_client.push(step().map_err(ExperimentError::training)?);
    }

    // history carries positional ids; map them back to the data's client ids
    let history = outcome
        .server
        .history
        .into_iter()
        .map(|mut r| {
            r.client_ids = r.client_ids.iter().map(|&i| client_ids[i]).collect();
            r.selected = r.selected.iter().map(|&i| client_ids[i]).collect();
            r
        })
        .collect();

    let scores: Vec<f64> = per_client.iter().map(|c| c.f_score).collect();
    let report = MetricsReport {
        config_echo: cfg.clone(),
        per_client,
        summary: Summary::of(&scores),
        rounds_run: outcome.server.round,
        history,
    };
    if let Some(dir) = &cfg.output_dir {
        report.write_to(dir).map_err(ExperimentError::data)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epochs: usize,
    pub mean_f: f64,
    pub std_f: f64,
}

/// One experiment per local-epoch count. With an output directory, each run
/// writes into `E<epochs>/` and the summary table goes to `sweep.csv`.
pub fn sweep(cfg: &ExperimentConfig, epochs_list: &[usize]) -> Result<(Vec<SweepRow>, Vec<MetricsReport>), ExperimentError> {
    if epochs_list.is_empty() {
        return Err(ExperimentError::config(Error::EmptyInput("epoch list")));
    }
    let mut rows = Vec::with_capacity(epochs_list.len());
    let mut reports = Vec::with_capacity(epochs_list.len());
    for &epochs in epochs_list {
        let mut run_cfg = cfg.clone();
        run_cfg.epochs = epochs;
        run_cfg.output_dir = cfg.output_dir.as_ref().map(|d| d.join(format!("E{epochs}")));
        let report = run_experiment(&run_cfg)?;
        rows.push(SweepRow {
            epochs,
            mean_f: report.summary.mean_f,
            std_f: report.summary.std_f,
        });
        reports.push(report);
    }
    if let Some(dir) = &cfg.output_dir {
        write_sweep_csv(&rows, dir).map_err(ExperimentError::data)?;
    }
    Ok((rows, reports))
}

fn write_sweep_csv(rows: &[SweepRow], dir: &Path) -> crate::Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("sweep.csv"))?;
    w.write_record(["epochs", "mean_f", "std_f"])?;
    for r in rows {
        w.write_record([r.epochs.to_string(), r.mean_f.to_string(), r.std_f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
