//! Events, signal preprocessing, train/test splitting, synthetic data and the
//! event CSV format.
//!
//! CSV layout: header `client_id,label,f_0,...,f_{d-1}`, labels `healthy` or
//! `damaged`, features as plain decimal floats.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::kernel::sq_dist;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Healthy,
    Damaged,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Healthy => "healthy",
            Label::Damaged => "damaged",
        }
    }

    pub fn parse(token: &str) -> Option<Label> {
        match token {
            "healthy" => Some(Label::Healthy),
            "damaged" => Some(Label::Damaged),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub client_id: usize,
    pub label: Label,
    pub features: Vec<f64>,
}

impl Event {
    pub fn new(client_id: usize, label: Label, features: Vec<f64>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyInput("event features"));
        }
        if features.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidParameter("event features must be finite".into()));
        }
        Ok(Self {
            client_id,
            label,
            features,
        })
    }
}

/// Rescales a signal to zero mean and unit population standard deviation.
pub fn normalize(signal: &[f64]) -> Result<Vec<f64>> {
    if signal.len() < 2 {
        return Err(Error::InvalidParameter("normalization needs at least two samples".into()));
    }
    let n = signal.len() as f64;
    let mean = signal.iter().sum::<f64>() / n;
    let var = signal.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if !(std > 0.0) || !std.is_finite() {
        return Err(Error::Degenerate("signal is constant".into()));
    }
    Ok(signal.iter().map(|x| (x - mean) / std).collect())
}

/// One-sided magnitude spectrum: zero-pad to the next power of two `N` and
/// return `|X_k|` for `k < N/2`. No window is applied.
pub fn fft_magnitude(signal: &[f64]) -> Result<Vec<f64>> {
    if signal.len() < 2 {
        return Err(Error::InvalidParameter("spectrum needs at least two samples".into()));
    }
    let n = signal.len().next_power_of_two();
    let mut buf: Vec<Complex<f64>> = signal.iter().map(|&x| Complex::new(x, 0.0)).collect();
    buf.resize(n, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Ok(buf[..n / 2].iter().map(|c| c.norm()).collect())
}

/// Time-domain signal to frequency-domain features: normalize, then spectrum.
pub fn preprocess(signal: &[f64]) -> Result<Vec<f64>> {
    fft_magnitude(&normalize(signal)?)
}

/// Per-client split: a `train_fraction` share of each client's healthy events
/// (rounded, at least one) goes to training; everything else, including all
/// damaged events, goes to test. Shuffling is keyed by `(seed, client_id)`.
pub fn split_train_test(events: &[Event], train_fraction: f64, seed: u64) -> Result<(Vec<Event>, Vec<Event>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if !events.iter().any(|e| e.label == Label::Healthy) {
        return Err(Error::EmptyInput("healthy events"));
    }
    let mut healthy: BTreeMap<usize, Vec<&Event>> = BTreeMap::new();
    let mut test = Vec::new();
    for e in events {
        match e.label {
            Label::Healthy => healthy.entry(e.client_id).or_default().push(e),
            Label::Damaged => test.push(e.clone()),
        }
    }
    let mut train = Vec::new();
    for (client, mut list) in healthy {
        list.shuffle(&mut client_rng(seed, client));
        let take = ((train_fraction * list.len() as f64).round() as usize).clamp(1, list.len());
        train.extend(list[..take].iter().map(|e| (*e).clone()));
        test.extend(list[take..].iter().map(|e| (*e).clone()));
    }
    Ok((train, test))
}

/// Deterministic generator for one client's stream.
pub fn client_rng(seed: u64, client_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(client_id as u64);
    rng
}

/// Synthetic non-IID clients: isotropic Gaussian healthy blobs per client and
/// damaged events placed away from every healthy centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub clients: usize,
    /// Healthy events per client.
    pub per_client: usize,
    pub dim: usize,
    pub healthy_centers: Vec<Vec<f64>>,
    pub healthy_spread: f64,
    /// Damaged events per client.
    pub anomaly_count: usize,
    /// Minimum distance of a damaged event from every healthy centre, in
    /// units of `healthy_spread`.
    pub anomaly_offset: f64,
    pub seed: u64,
}

impl SynthConfig {
    /// Clients on a ring of radius `10 * spread` in the first two coordinates.
    pub fn ring(clients: usize, per_client: usize, dim: usize, anomaly_count: usize, seed: u64) -> Self {
        let healthy_centers = (0..clients)
            .map(|c| {
                let angle = std::f64::consts::TAU * c as f64 / clients as f64;
                let mut center = vec![0.0; dim];
                center[0] = 10.0 * angle.cos();
                if dim > 1 {
                    center[1] = 10.0 * angle.sin();
                }
                center
            })
            .collect();
        Self {
            clients,
            per_client,
            dim,
            healthy_centers,
            healthy_spread: 1.0,
            anomaly_count,
            anomaly_offset: 4.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.clients == 0 || self.per_client == 0 || self.dim == 0 {
            return Err(Error::InvalidParameter(
                "clients, per_client and dim must be positive".into(),
            ));
        }
        check_len(self.clients, self.healthy_centers.len())?;
        for c in &self.healthy_centers {
            check_len(self.dim, c.len())?;
        }
        if !(self.healthy_spread > 0.0 && self.anomaly_offset > 0.0) {
            return Err(Error::InvalidParameter(
                "healthy_spread and anomaly_offset must be positive".into(),
            ));
        }
        Ok(())
    }
}

const PLACEMENT_ATTEMPTS: usize = 10_000;

pub fn synth_generate(cfg: &SynthConfig) -> Result<Vec<Event>> {
    cfg.validate()?;
    let min_dist = cfg.anomaly_offset * cfg.healthy_spread;
    let mut events = Vec::with_capacity(cfg.clients * (cfg.per_client + cfg.anomaly_count));
    for (client, center) in cfg.healthy_centers.iter().enumerate() {
        let mut rng = client_rng(cfg.seed, client);
        for _ in 0..cfg.per_client {
            let x = center
                .iter()
                .map(|c| c + cfg.healthy_spread * rng.sample::<f64, _>(StandardNormal))
                .collect();
            events.push(Event::new(client, Label::Healthy, x)?);
        }
        for _ in 0..cfg.anomaly_count {
            let x = place_anomaly(&mut rng, center, &cfg.healthy_centers, min_dist)?;
            events.push(Event::new(client, Label::Damaged, x)?);
        }
    }
    Ok(events)
}

/// A point at radius `[1, 1.5] * min_dist` around `center` in a uniformly
/// random direction, rejected until it clears every healthy centre.
fn place_anomaly(rng: &mut ChaCha8Rng, center: &[f64], centers: &[Vec<f64>], min_dist: f64) -> Result<Vec<f64>> {
    for _ in 0..PLACEMENT_ATTEMPTS {
        let dir: Vec<f64> = center.iter().map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let len = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        let radius = min_dist * rng.gen_range(1.0..1.5);
        let x: Vec<f64> = center.iter().zip(&dir).map(|(c, d)| c + radius * d / len).collect();
        if centers.iter().all(|c| sq_dist(c, &x) >= min_dist * min_dist) {
            return Ok(x);
        }
    }
    Err(Error::Degenerate(format!(
        "could not place a damaged event {min_dist} away from all healthy centres"
    )))
}

pub fn load_events_csv(path: impl AsRef<Path>) -> Result<Vec<Event>> {
    read_events_csv(File::open(path)?)
}

/// Parses the event CSV. Row numbers in errors count data rows from 1.
pub fn read_events_csv<R: Read>(input: R) -> Result<Vec<Event>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = reader.headers()?.clone();
    let header_err = |message: String| Error::Parse { row: 0, message };
    if header.get(0) != Some("client_id") || header.get(1) != Some("label") {
        return Err(header_err("header must start with client_id,label".into()));
    }
    let dim = header.len().saturating_sub(2);
    if dim == 0 {
        return Err(header_err("header has no feature columns".into()));
    }
    for (i, name) in header.iter().skip(2).enumerate() {
        if name != format!("f_{i}") {
            return Err(header_err(format!("expected column f_{i}, found {name:?}")));
        }
    }
    let mut events = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let parse_err = |message: String| Error::Parse { row, message };
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        if record.len() != header.len() {
            return Err(parse_err(format!("expected {} columns, found {}", header.len(), record.len())));
        }
        let client_id = record[0]
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_err(format!("invalid client_id {:?}", &record[0])))?;
        let label = Label::parse(record[1].trim())
            .ok_or_else(|| parse_err(format!("unknown label {:?}", &record[1])))?;
        let features = record
            .iter()
            .skip(2)
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(format!("non-numeric feature {f:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        events.push(Event::new(client_id, label, features).map_err(|e| parse_err(e.to_string()))?);
    }
    Ok(events)
}

pub fn write_events_csv<W: Write>(events: &[Event], out: W) -> Result<()> {
    let dim = events.first().map_or(0, |e| e.features.len());
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["client_id".to_string(), "label".to_string()];
    header.extend((0..dim).map(|i| format!("f_{i}")));
    writer.write_record(&header)?;
    for e in events {
        check_len(dim, e.features.len())?;
        let mut row = vec![e.client_id.to_string(), e.label.as_str().to_string()];
        row.extend(e.features.iter().map(|f| f.to_string()));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}
