//! Cascade data model and the persistent sample inventory.
//!
//! The inventory is the registry behind resumable sampling: every sample,
//! including partially processed ones, keeps its per-stage parameters and
//! measurements so a campaign can continue any sample from the stage it
//! stopped at. State changes are expressible as a line-delimited event log
//! (see [`Inventory::to_log_string`]) that replays to a bit-identical
//! inventory, which is how interrupted campaigns resume exactly.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InventoryError {
    #[error("schema invalid: {0}")]
    Schema(String),
    #[error("parameter vector has length {got}, stage {stage} expects {expected}")]
    ParamDim { stage: usize, expected: usize, got: usize },
    #[error("measurement vector has length {got}, stage {stage} expects {expected}")]
    MeasurementDim { stage: usize, expected: usize, got: usize },
    #[error("parameter {value} outside [0,1]")]
    ParamOutOfDomain { value: f64 },
    #[error("unknown sample id {0}")]
    UnknownSample(u64),
    #[error("stage {got} out of order for sample {sample_id}: next stage is {expected}")]
    OutOfOrderStage { sample_id: u64, expected: usize, got: usize },
    #[error("stage {0} out of range 1..={1}")]
    StageOutOfRange(usize, usize),
    #[error("event log line {line}: {reason}")]
    MalformedLog { line: usize, reason: String },
}

/// How downstream surrogate inputs are assembled from upstream information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateMode {
    /// `[x_i, m_{i-1}]` — Markovian dependency on the last measurement.
    Standard,
    /// `[x_i, x_{i-1}, m_{i-1}]` — previous parameters ride along, which
    /// limits information loss when the measurement masks the latent state.
    Residual,
}

/// Per-stage description: controllable dims, latent dims, which latent
/// components are observable and what executing the stage costs.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSpec {
    pub x_dim: usize,
    pub h_dim: usize,
    /// Zero-based indices into the latent vector, the diagonal of the
    /// binary masking matrix.
    pub observed: Vec<usize>,
    pub cost: f64,
}

/// Declarative description of an N-stage cascade process.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSchema {
    stages: Vec<StageSpec>,
    pub surrogate_mode: SurrogateMode,
}

impl CascadeSchema {
    pub fn new(stages: Vec<StageSpec>, surrogate_mode: SurrogateMode) -> Result<Self, InventoryError> {
        if stages.is_empty() {
            return Err(InventoryError::Schema("at least one stage required".into()));
        }
        for (i, st) in stages.iter().enumerate() {
            if st.x_dim == 0 || st.h_dim == 0 {
                return Err(InventoryError::Schema(format!("stage {} has a zero dimension", i + 1)));
            }
            if st.observed.is_empty() {
                return Err(InventoryError::Schema(format!("stage {} observes nothing", i + 1)));
            }
            if st.observed.iter().any(|&j| j >= st.h_dim) {
                return Err(InventoryError::Schema(format!("stage {} mask index out of bounds", i + 1)));
            }
            let mut sorted = st.observed.clone();
            sorted.dedup();
            if sorted.len() != st.observed.len() || !st.observed.windows(2).all(|w| w[0] < w[1]) {
                return Err(InventoryError::Schema(format!(
                    "stage {} mask indices must be strictly increasing",
                    i + 1
                )));
            }
            if !(st.cost > 0.0) {
                return Err(InventoryError::Schema(format!("stage {} cost must be positive", i + 1)));
            }
        }
        let last = stages.last().unwrap();
        if last.observed.len() != 1 {
            return Err(InventoryError::Schema(
                "final stage must observe exactly one output (scalar objective)".into(),
            ));
        }
        Ok(CascadeSchema { stages, surrogate_mode })
    }

    pub fn n_stages(&self) -> usize {
        self.stages.len()
    }

    /// Stage spec, 1-based.
    pub fn stage(&self, stage: usize) -> &StageSpec {
        &self.stages[stage - 1]
    }

    pub fn stages(&self) -> &[StageSpec] {
        &self.stages
    }

    /// Total number of controllable parameters across all stages.
    pub fn total_x_dim(&self) -> usize {
        self.stages.iter().map(|s| s.x_dim).sum()
    }

    pub fn total_cost(&self) -> f64 {
        self.stages.iter().map(|s| s.cost).sum()
    }

    /// Rescale costs so a full cascade evaluation costs exactly 1.
    pub fn normalise_costs(&mut self) {
        let total = self.total_cost();
        for s in &mut self.stages {
            s.cost /= total;
        }
        // Force the sum to land exactly on 1 despite rounding.
        let residual: f64 = 1.0 - self.total_cost();
        if let Some(last) = self.stages.last_mut() {
            last.cost += residual;
        }
    }

    /// Offset of stage `i`'s parameters inside the joint parameter vector.
    pub fn x_offset(&self, stage: usize) -> usize {
        self.stages[..stage - 1].iter().map(|s| s.x_dim).sum()
    }

    /// Split a joint parameter vector into per-stage slices.
    pub fn split_joint<'a>(&self, joint: &'a [f64]) -> Vec<&'a [f64]> {
        assert_eq!(joint.len(), self.total_x_dim());
        let mut out = Vec::with_capacity(self.n_stages());
        let mut off = 0;
        for s in &self.stages {
            out.push(&joint[off..off + s.x_dim]);
            off += s.x_dim;
        }
        out
    }
}

/// Where a sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    InitDesign,
    Acquisition,
}

/// One sample's full processing history.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub sample_id: u64,
    pub origin: Origin,
    pub iteration_created: u64,
    /// Stage-1 parameters staged at creation time.
    staged_params: Vec<f64>,
    stage_params: Vec<Vec<f64>>,
    measurements: Vec<Vec<f64>>,
    pub accumulated_cost: f64,
}

impl SampleRecord {
    pub fn stages_completed(&self) -> usize {
        self.measurements.len()
    }

    /// Parameters executed at `stage` (1-based), if that stage completed.
    pub fn params(&self, stage: usize) -> Option<&[f64]> {
        self.stage_params.get(stage - 1).map(|v| v.as_slice())
    }

    /// Measurement recorded at `stage` (1-based), if completed.
    pub fn measurement(&self, stage: usize) -> Option<&[f64]> {
        self.measurements.get(stage - 1).map(|v| v.as_slice())
    }

    pub fn staged_params(&self) -> &[f64] {
        &self.staged_params
    }

    /// Scalar objective of a fully processed sample.
    pub fn terminal_objective(&self, schema: &CascadeSchema) -> Option<f64> {
        if self.stages_completed() == schema.n_stages() {
            Some(self.measurements[schema.n_stages() - 1][0])
        } else {
            None
        }
    }

    /// Per-stage parameter vectors of a fully processed sample.
    pub fn full_params(&self, schema: &CascadeSchema) -> Option<Vec<Vec<f64>>> {
        if self.stages_completed() == schema.n_stages() {
            Some(self.stage_params.clone())
        } else {
            None
        }
    }
}

fn check_params(schema: &CascadeSchema, stage: usize, params: &[f64]) -> Result<(), InventoryError> {
    let expected = schema.stage(stage).x_dim;
    if params.len() != expected {
        return Err(InventoryError::ParamDim { stage, expected, got: params.len() });
    }
    for &v in params {
        if !(0.0..=1.0).contains(&v) {
            return Err(InventoryError::ParamOutOfDomain { value: v });
        }
    }
    Ok(())
}

/// Registry of every sample a campaign has touched.
#[derive(Debug, Clone, PartialEq)]
pub struct Inventory {
    schema: CascadeSchema,
    records: Vec<SampleRecord>,
    total_cost_spent: f64,
}

impl Inventory {
    pub fn new(schema: CascadeSchema) -> Self {
        Inventory { schema, records: Vec::new(), total_cost_spent: 0.0 }
    }

    pub fn schema(&self) -> &CascadeSchema {
        &self.schema
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn record(&self, sample_id: u64) -> Option<&SampleRecord> {
        self.records.iter().find(|r| r.sample_id == sample_id)
    }

    pub fn total_cost_spent(&self) -> f64 {
        self.total_cost_spent
    }

    /// Register a new sample ready to run stage 1 with `params_1` staged.
    pub fn create_sample(
        &mut self,
        params_1: &[f64],
        origin: Origin,
        iteration: u64,
    ) -> Result<u64, InventoryError> {
        check_params(&self.schema, 1, params_1)?;
        let sample_id = self.records.len() as u64;
        self.records.push(SampleRecord {
            sample_id,
            origin,
            iteration_created: iteration,
            staged_params: params_1.to_vec(),
            stage_params: Vec::new(),
            measurements: Vec::new(),
            accumulated_cost: 0.0,
        });
        Ok(sample_id)
    }

    /// Record the outcome of executing `stage` on `sample_id`. Stages must be
    /// completed in order.
    pub fn record_measurement(
        &mut self,
        sample_id: u64,
        stage: usize,
        params: &[f64],
        measurement: &[f64],
    ) -> Result<&SampleRecord, InventoryError> {
        if stage < 1 || stage > self.schema.n_stages() {
            return Err(InventoryError::StageOutOfRange(stage, self.schema.n_stages()));
        }
        check_params(&self.schema, stage, params)?;
        let expected = self.schema.stage(stage).observed.len();
        if measurement.len() != expected {
            return Err(InventoryError::MeasurementDim { stage, expected, got: measurement.len() });
        }
        let cost = self.schema.stage(stage).cost;
        let idx = self
            .records
            .iter()
            .position(|r| r.sample_id == sample_id)
            .ok_or(InventoryError::UnknownSample(sample_id))?;
        let rec = &mut self.records[idx];
        if rec.stages_completed() + 1 != stage {
            return Err(InventoryError::OutOfOrderStage {
                sample_id,
                expected: rec.stages_completed() + 1,
                got: stage,
            });
        }
        rec.stage_params.push(params.to_vec());
        rec.measurements.push(measurement.to_vec());
        rec.accumulated_cost += cost;
        self.total_cost_spent += cost;
        Ok(&self.records[idx])
    }

    /// All samples that completed exactly `stage - 1` stages, paired with
    /// their last measurement: the valid continuation points for `stage`.
    pub fn continuation_candidates(
        &self,
        stage: usize,
    ) -> Result<Vec<(u64, &[f64])>, InventoryError> {
        if stage < 2 || stage > self.schema.n_stages() {
            return Err(InventoryError::StageOutOfRange(stage, self.schema.n_stages()));
        }
        Ok(self
            .records
            .iter()
            .filter(|r| r.stages_completed() == stage - 1)
            .map(|r| (r.sample_id, r.measurements[stage - 2].as_slice()))
            .collect())
    }

    /// Best terminal objective observed so far; ties break to the lowest
    /// sample id. `None` until a sample completes the cascade.
    pub fn best_observed(&self) -> Option<(f64, u64)> {
        let mut best: Option<(f64, u64)> = None;
        for r in &self.records {
            if let Some(y) = r.terminal_objective(&self.schema) {
                if best.map_or(true, |(b, _)| y > b) {
                    best = Some((y, r.sample_id));
                }
            }
        }
        best
    }

    /// Number of completed executions per stage.
    pub fn stage_execution_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.schema.n_stages()];
        for r in &self.records {
            for c in counts.iter_mut().take(r.stages_completed()) {
                *c += 1;
            }
        }
        counts
    }

    /// Fraction of all stage executions attributable to each stage. An empty
    /// inventory reports the uniform vector so the frequency constraint has
    /// something to compare against before the adaptive phase.
    pub fn stage_sampling_frequencies(&self) -> Vec<f64> {
        let counts = self.stage_execution_counts();
        let total: usize = counts.iter().sum();
        let n = self.schema.n_stages();
        if total == 0 {
            return vec![1.0 / n as f64; n];
        }
        counts.iter().map(|&c| c as f64 / total as f64).collect()
    }

    /// Number of records that have completed stage `stage` (i.e. progressed
    /// at least that far).
    pub fn completed_through(&self, stage: usize) -> usize {
        self.records.iter().filter(|r| r.stages_completed() >= stage).count()
    }

    // ---- event log -------------------------------------------------------

    /// Serialise as a line-delimited event log. One event per line, fields
    /// separated by single spaces:
    ///
    /// ```text
    /// <kind> <sample_id> <stage> <params> <measurement> <cost>
    /// ```
    ///
    /// `kind` is `create_init`, `create_acq` or `measure`. Vector fields are
    /// comma-separated decimals in shortest round-trip form. For create
    /// events the stage column carries the creating iteration, the params
    /// column the staged stage-1 parameters, the measurement column `-` and
    /// the cost `0`.
    pub fn to_log_string(&self) -> String {
        let mut events: Vec<(u64, usize, String)> = Vec::new();
        for r in &self.records {
            let kind = match r.origin {
                Origin::InitDesign => "create_init",
                Origin::Acquisition => "create_acq",
            };
            events.push((
                r.sample_id,
                0,
                format!(
                    "{kind} {} {} {} - 0",
                    r.sample_id,
                    r.iteration_created,
                    join_floats(&r.staged_params)
                ),
            ));
            for (i, m) in r.measurements.iter().enumerate() {
                let stage = i + 1;
                events.push((
                    r.sample_id,
                    stage,
                    format!(
                        "measure {} {} {} {} {}",
                        r.sample_id,
                        stage,
                        join_floats(&r.stage_params[i]),
                        join_floats(m),
                        self.schema.stage(stage).cost
                    ),
                ));
            }
        }
        // Creation order interleaved with measurement order is not recorded
        // explicitly; replay only needs per-sample ordering, which sorting by
        // (sample_id, stage) preserves.
        events.sort_by_key(|(id, stage, _)| (*id, *stage));
        let mut out = String::new();
        for (_, _, line) in events {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Rebuild an inventory by replaying an event log against `schema`.
    pub fn replay(schema: CascadeSchema, log: &str) -> Result<Self, InventoryError> {
        let mut inv = Inventory::new(schema);
        for (lineno, line) in log.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 6 {
                return Err(InventoryError::MalformedLog {
                    line: lineno + 1,
                    reason: format!("expected 6 fields, got {}", fields.len()),
                });
            }
            let bad = |reason: &str| InventoryError::MalformedLog {
                line: lineno + 1,
                reason: reason.to_string(),
            };
            let sample_id: u64 = fields[1].parse().map_err(|_| bad("bad sample id"))?;
            let stage: u64 = fields[2].parse().map_err(|_| bad("bad stage"))?;
            let params = parse_floats(fields[3]).map_err(|_| bad("bad params"))?;
            match fields[0] {
                "create_init" | "create_acq" => {
                    let origin = if fields[0] == "create_init" {
                        Origin::InitDesign
                    } else {
                        Origin::Acquisition
                    };
                    let id = inv.create_sample(&params, origin, stage)?;
                    if id != sample_id {
                        return Err(bad(&format!("expected sample id {id}, log says {sample_id}")));
                    }
                }
                "measure" => {
                    if fields[4] == "-" {
                        return Err(bad("measure event without measurement"));
                    }
                    let measurement = parse_floats(fields[4]).map_err(|_| bad("bad measurement"))?;
                    let cost: f64 = fields[5].parse().map_err(|_| bad("bad cost"))?;
                    let rec =
                        inv.record_measurement(sample_id, stage as usize, &params, &measurement)?;
                    let expected = inv.schema.stage(stage as usize).cost;
                    let _ = rec;
                    if cost.to_bits() != expected.to_bits() {
                        return Err(bad(&format!(
                            "logged cost {cost} disagrees with schema cost {expected}"
                        )));
                    }
                }
                other => return Err(bad(&format!("unknown event kind {other}"))),
            }
        }
        Ok(inv)
    }
}

fn join_floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    parts.join(",")
}

fn parse_floats(s: &str) -> Result<Vec<f64>, std::num::ParseFloatError> {
    s.split(',').map(|p| p.parse::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_stage_schema(costs: (f64, f64)) -> CascadeSchema {
        CascadeSchema::new(
            vec![
                StageSpec { x_dim: 2, h_dim: 1, observed: vec![0], cost: costs.0 },
                StageSpec { x_dim: 1, h_dim: 1, observed: vec![0], cost: costs.1 },
            ],
            SurrogateMode::Standard,
        )
        .unwrap()
    }

    fn three_stage_schema() -> CascadeSchema {
        CascadeSchema::new(
            vec![
                StageSpec { x_dim: 1, h_dim: 2, observed: vec![0, 1], cost: 1.0 },
                StageSpec { x_dim: 1, h_dim: 2, observed: vec![0], cost: 1.0 },
                StageSpec { x_dim: 1, h_dim: 1, observed: vec![0], cost: 1.0 },
            ],
            SurrogateMode::Standard,
        )
        .unwrap()
    }

    #[test]
    fn create_sample_stages_params() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
        let rec = inv.record(id).unwrap();
        assert_eq!(rec.stages_completed(), 0);
        assert_eq!(rec.staged_params(), &[0.5, 0.5]);
    }

    #[test]
    fn sample_ids_are_distinct() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        let a = inv.create_sample(&[0.1, 0.2], Origin::InitDesign, 0).unwrap();
        let b = inv.create_sample(&[0.1, 0.2], Origin::InitDesign, 0).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn rejects_out_of_domain_params() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        let err = inv.create_sample(&[1.2, 0.0], Origin::InitDesign, 0).unwrap_err();
        assert_eq!(err, InventoryError::ParamOutOfDomain { value: 1.2 });
    }

    #[test]
    fn recording_accumulates_cost() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
        inv.record_measurement(id, 1, &[0.5, 0.5], &[2.0]).unwrap();
        assert_eq!(inv.record(id).unwrap().accumulated_cost, 1.0);
        assert_eq!(inv.total_cost_spent(), 1.0);
    }

    #[test]
    fn rejects_out_of_order_stage() {
        let mut inv = three_stage_schema_inv();
        let id = inv.create_sample(&[0.5], Origin::InitDesign, 0).unwrap();
        inv.record_measurement(id, 1, &[0.5], &[0.0, 0.0]).unwrap();
        let err = inv.record_measurement(id, 3, &[0.5], &[0.0]).unwrap_err();
        assert_eq!(err, InventoryError::OutOfOrderStage { sample_id: id, expected: 2, got: 3 });
    }

    fn three_stage_schema_inv() -> Inventory {
        Inventory::new(three_stage_schema())
    }

    #[test]
    fn normalised_costs_sum_to_one_over_a_full_run() {
        let mut schema = two_stage_schema((1.0, 10.0));
        schema.normalise_costs();
        assert!((schema.total_cost() - 1.0).abs() < 1e-12);
        let mut inv = Inventory::new(schema);
        let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
        inv.record_measurement(id, 1, &[0.5, 0.5], &[0.3]).unwrap();
        inv.record_measurement(id, 2, &[0.5], &[0.7]).unwrap();
        assert!((inv.record(id).unwrap().accumulated_cost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn continuation_candidates_filter_by_progress() {
        let mut inv = three_stage_schema_inv();
        let a = inv.create_sample(&[0.1], Origin::InitDesign, 0).unwrap();
        let b = inv.create_sample(&[0.2], Origin::InitDesign, 0).unwrap();
        let c = inv.create_sample(&[0.3], Origin::InitDesign, 0).unwrap();
        inv.record_measurement(b, 1, &[0.2], &[1.0, 2.0]).unwrap();
        inv.record_measurement(c, 1, &[0.3], &[3.0, 4.0]).unwrap();
        inv.record_measurement(c, 2, &[0.3], &[5.0]).unwrap();
        let stage2 = inv.continuation_candidates(2).unwrap();
        assert_eq!(stage2.len(), 1);
        assert_eq!(stage2[0].0, b);
        assert_eq!(stage2[0].1, &[1.0, 2.0]);
        let _ = a;
    }

    #[test]
    fn continuation_candidates_empty_inventory() {
        let inv = three_stage_schema_inv();
        assert!(inv.continuation_candidates(2).unwrap().is_empty());
        assert!(inv.continuation_candidates(4).is_err());
    }

    #[test]
    fn continuation_candidates_track_progress() {
        let mut inv = three_stage_schema_inv();
        let a = inv.create_sample(&[0.1], Origin::InitDesign, 0).unwrap();
        inv.record_measurement(a, 1, &[0.1], &[0.0, 0.0]).unwrap();
        inv.record_measurement(a, 2, &[0.1], &[0.5]).unwrap();
        let stage3 = inv.continuation_candidates(3).unwrap();
        assert_eq!(stage3, vec![(a, [0.5].as_slice())]);
    }

    #[test]
    fn best_observed_takes_the_maximum() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        for y in [0.2, 0.9, 0.5] {
            let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
            inv.record_measurement(id, 1, &[0.5, 0.5], &[0.0]).unwrap();
            inv.record_measurement(id, 2, &[0.5], &[y]).unwrap();
        }
        assert_eq!(inv.best_observed(), Some((0.9, 1)));
    }

    #[test]
    fn best_observed_none_without_completions() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
        inv.record_measurement(id, 1, &[0.5, 0.5], &[0.0]).unwrap();
        assert_eq!(inv.best_observed(), None);
    }

    #[test]
    fn best_observed_ties_break_to_lowest_id() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        for _ in 0..2 {
            let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
            inv.record_measurement(id, 1, &[0.5, 0.5], &[0.0]).unwrap();
            inv.record_measurement(id, 2, &[0.5], &[0.7]).unwrap();
        }
        assert_eq!(inv.best_observed(), Some((0.7, 0)));
    }

    #[test]
    fn sampling_frequencies_are_ratios() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        for i in 0..3 {
            let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
            inv.record_measurement(id, 1, &[0.5, 0.5], &[0.0]).unwrap();
            if i == 0 {
                inv.record_measurement(id, 2, &[0.5], &[0.1]).unwrap();
            }
        }
        assert_eq!(inv.stage_sampling_frequencies(), vec![0.75, 0.25]);
    }

    #[test]
    fn sampling_frequencies_full_cascades_are_uniform() {
        let mut inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        for _ in 0..4 {
            let id = inv.create_sample(&[0.5, 0.5], Origin::InitDesign, 0).unwrap();
            inv.record_measurement(id, 1, &[0.5, 0.5], &[0.0]).unwrap();
            inv.record_measurement(id, 2, &[0.5], &[0.1]).unwrap();
        }
        assert_eq!(inv.stage_sampling_frequencies(), vec![0.5, 0.5]);
    }

    #[test]
    fn sampling_frequencies_empty_is_uniform() {
        let inv = Inventory::new(two_stage_schema((1.0, 1.0)));
        assert_eq!(inv.stage_sampling_frequencies(), vec![0.5, 0.5]);
    }

    #[test]
    fn event_log_round_trips_bit_exactly() {
        let mut inv = Inventory::new(two_stage_schema((1.0 / 11.0, 10.0 / 11.0)));
        let a = inv.create_sample(&[0.123456789123, 0.5], Origin::InitDesign, 0).unwrap();
        let b = inv.create_sample(&[0.1, 1.0 / 3.0], Origin::Acquisition, 7).unwrap();
        inv.record_measurement(a, 1, &[0.123456789123, 0.5], &[0.1 + 0.2]).unwrap();
        inv.record_measurement(a, 2, &[0.25], &[-1.5e-13]).unwrap();
        inv.record_measurement(b, 1, &[0.1, 1.0 / 3.0], &[f64::MIN_POSITIVE]).unwrap();
        let log = inv.to_log_string();
        let replayed = Inventory::replay(inv.schema().clone(), &log).unwrap();
        assert_eq!(replayed, inv);
        assert_eq!(replayed.to_log_string(), log);
    }

    #[test]
    fn replay_rejects_malformed_lines() {
        let schema = two_stage_schema((1.0, 1.0));
        let err = Inventory::replay(schema.clone(), "create_init 0 0 0.5,0.5 -\n").unwrap_err();
        assert!(matches!(err, InventoryError::MalformedLog { line: 1, .. }));
        let err = Inventory::replay(schema, "bogus 0 0 0.5,0.5 - 0\n").unwrap_err();
        assert!(matches!(err, InventoryError::MalformedLog { line: 1, .. }));
    }
}
