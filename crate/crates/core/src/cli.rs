//! Command-line front end and TOML configuration.
//!
//! Exit codes: 0 success, 1 audit failure, 2 configuration error,
//! 3 runtime error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{min_gap_t, IntersectionSpec, LaneId, LegLanes, Movement, VehicleParams};
use crate::queueing::{
    average_delay, delay_bound, poisson_delay, steady_state, ArrivalDistribution,
};
use crate::rhythm::{
    audit, entry_schedule, row_profile, solve_travel_times, EntrySchedule, RhythmTiming,
    SegmentLengths, SpeedBand,
};
use crate::simulator::{
    gen_stationary, sweep, ArrivalPattern, Scenario, ScenarioTemplate, Scheme, SimContext,
    SweepGrid, TscParams, BALANCED, HEAVY_APPROACH, IMBALANCED,
};
use crate::trajectory::{assign_curve, AdjustmentZone, CurveShape, SpeedCurve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntersectionConfig {
    /// Through lanes per leg when all legs are alike.
    pub through: u8,
    /// Left lanes per leg when all legs are alike.
    pub left: u8,
    /// Per-leg `[through, left]`, legs 1..=4. Overrides `through`/`left`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legs: Option<Vec<[u8; 2]>>,
    /// `[leg, lane]` pairs of disabled lanes.
    pub disabled: Vec<[u8; 2]>,
}

impl Default for IntersectionConfig {
    fn default() -> Self {
        Self {
            through: 3,
            left: 2,
            legs: None,
            disabled: Vec::new(),
        }
    }
}

/// Timing values forced onto the solved timing, in multiples of `T`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t4: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t5: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RhythmConfig {
    /// Length used for every segment category not given explicitly;
    /// defaults to `v_max * T`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cat2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cat3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cat4: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cat5: Option<Vec<f64>>,
    /// Lowest admissible segment speed; the highest is `v_max`.
    pub min_speed: f64,
    pub audit_window: usize,
    pub horizon: f64,
    pub resolution: f64,
    pub timing: TimingOverride,
}

impl Default for RhythmConfig {
    fn default() -> Self {
        Self {
            segment_length: None,
            cat2: None,
            cat3: None,
            cat4: None,
            cat5: None,
            min_speed: 3.0,
            audit_window: 200,
            horizon: 20.0,
            resolution: 0.05,
            timing: TimingOverride::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeConfig {
    /// Loads `2 theta T` are swept from `load_min` to `load_max`.
    pub load_min: f64,
    pub load_max: f64,
    pub steps: usize,
    /// Arrival probabilities per period; Poisson when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    pub tolerance: f64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            load_min: 0.05,
            load_max: 0.95,
            steps: 19,
            probs: None,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajConfig {
    pub zone_length: f64,
    pub leg: u8,
    pub lane: u8,
    /// Vehicles per second entering the zone.
    pub rate: f64,
    pub vehicles: usize,
    /// Explicit zone entry times; replaces the random stream when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<f64>>,
    pub sample_step: f64,
}

impl Default for TrajConfig {
    fn default() -> Self {
        Self {
            zone_length: 100.0,
            leg: 1,
            lane: 1,
            rate: 0.5,
            vehicles: 20,
            entries: None,
            sample_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    /// Scheme for `simulate`.
    pub scheme: Scheme,
    /// Schemes for `sweep`.
    pub schemes: Vec<Scheme>,
    /// Scenario for `simulate`: balanced, imbalanced, heavy or custom.
    pub scenario: String,
    /// Scenarios for `sweep`.
    pub scenarios: Vec<String>,
    /// Per-lane demand in veh/h for the `custom` scenario.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub demand: Option<[f64; 8]>,
    /// `stationary` or `bursty`.
    pub pattern: String,
    pub burst_period: f64,
    pub burst_length: f64,
    pub burst_ratio: f64,
    pub alpha: f64,
    pub alphas: Vec<f64>,
    pub duration: f64,
    pub replications: usize,
    pub seed: u64,
    pub rc_systematic_delay: f64,
    pub fcfs_tick: f64,
    pub tsc: TscParams,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Rc,
            schemes: vec![Scheme::Rc, Scheme::Tsc, Scheme::Fcfs],
            scenario: "balanced".into(),
            scenarios: vec!["balanced".into()],
            demand: None,
            pattern: "stationary".into(),
            burst_period: 200.0,
            burst_length: 50.0,
            burst_ratio: 4.0,
            alpha: 1.0,
            alphas: (3..=18).map(|i| i as f64 / 10.0).collect(),
            duration: 3600.0,
            replications: 5,
            seed: 1,
            rc_systematic_delay: 1.0,
            fcfs_tick: 0.1,
            tsc: TscParams::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub intersection: IntersectionConfig,
    pub vehicle: VehicleParams,
    pub rhythm: RhythmConfig,
    pub analyze: AnalyzeConfig,
    pub traj: TrajConfig,
    pub simulation: SimulationConfig,
}

fn semantic(field: &str, message: impl Into<String>) -> Error {
    Error::ConfigSemantic {
        field: field.to_string(),
        message: message.into(),
    }
}

fn positive(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(semantic(field, format!("must be positive, got {x}")))
    }
}

impl Config {
    /// Canonical TOML text; parsing it back yields an equal `Config`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.vehicle
            .validate()
            .map_err(|e| semantic("vehicle", e.to_string()))?;
        let spec = self.spec()?;
        let r = &self.rhythm;
        for (f, v) in [
            ("rhythm.segment_length", r.segment_length),
            ("rhythm.cat2", r.cat2),
            ("rhythm.cat3", r.cat3),
            ("rhythm.cat4", r.cat4),
        ] {
            if let Some(v) = v {
                positive(f, v)?;
            }
        }
        if let Some(c5) = &r.cat5 {
            if c5.len() != spec.n_l() as usize {
                return Err(semantic(
                    "rhythm.cat5",
                    format!("needs {} entries, one per left lane", spec.n_l()),
                ));
            }
            c5.iter().try_for_each(|&v| positive("rhythm.cat5", v))?;
        }
        positive("rhythm.min_speed", r.min_speed)?;
        if r.min_speed > self.vehicle.v_max {
            return Err(semantic("rhythm.min_speed", "exceeds vehicle.v_max"));
        }
        if r.audit_window < 2 {
            return Err(semantic("rhythm.audit_window", "must be at least 2"));
        }
        positive("rhythm.horizon", r.horizon)?;
        positive("rhythm.resolution", r.resolution)?;
        if let Some(t5) = &r.timing.t5 {
            if t5.len() != spec.n_l() as usize {
                return Err(semantic(
                    "rhythm.timing.t5",
                    "needs one entry per left lane",
                ));
            }
        }
        let a = &self.analyze;
        if !(a.load_min > 0.0 && a.load_min <= a.load_max && a.load_max < 1.0) {
            return Err(semantic(
                "analyze",
                "loads must satisfy 0 < load_min <= load_max < 1",
            ));
        }
        if a.steps == 0 {
            return Err(semantic("analyze.steps", "must be at least 1"));
        }
        positive("analyze.tolerance", a.tolerance)?;
        if let Some(p) = &a.probs {
            ArrivalDistribution::from_probs(p.clone(), 1.0)
                .map_err(|e| semantic("analyze.probs", e.to_string()))?;
        }
        let t = &self.traj;
        positive("traj.zone_length", t.zone_length)?;
        positive("traj.rate", t.rate)?;
        positive("traj.sample_step", t.sample_step)?;
        if !(1..=4).contains(&t.leg) || t.lane < 1 || t.lane > spec.lanes_per_leg() {
            return Err(semantic("traj.lane", "lane outside the layout"));
        }
        if !spec.is_active(LaneId::new(t.leg, t.lane)) {
            return Err(semantic("traj.lane", "lane is virtual or disabled"));
        }
        let s = &self.simulation;
        for name in s.scenarios.iter().chain(std::iter::once(&s.scenario)) {
            self.demand_of(name)?;
        }
        if s.schemes.is_empty() {
            return Err(semantic("simulation.schemes", "must not be empty"));
        }
        if !matches!(s.pattern.as_str(), "stationary" | "bursty") {
            return Err(semantic(
                "simulation.pattern",
                "must be `stationary` or `bursty`",
            ));
        }
        positive("simulation.burst_period", s.burst_period)?;
        positive("simulation.burst_ratio", s.burst_ratio)?;
        if !(s.burst_length > 0.0 && s.burst_length < s.burst_period) {
            return Err(semantic(
                "simulation.burst_length",
                "must lie in (0, burst_period)",
            ));
        }
        for &alpha in s.alphas.iter().chain(std::iter::once(&s.alpha)) {
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(semantic(
                    "simulation.alpha",
                    format!("must be non-negative, got {alpha}"),
                ));
            }
        }
        positive("simulation.duration", s.duration)?;
        if s.replications == 0 {
            return Err(semantic("simulation.replications", "must be at least 1"));
        }
        if !(s.rc_systematic_delay >= 0.0) {
            return Err(semantic(
                "simulation.rc_systematic_delay",
                "must be non-negative",
            ));
        }
        positive("simulation.fcfs_tick", s.fcfs_tick)?;
        positive("simulation.tsc.phase_loss", s.tsc.phase_loss)?;
        positive("simulation.tsc.min_green", s.tsc.min_green)?;
        positive("simulation.tsc.max_cycle", s.tsc.max_cycle)?;
        Ok(())
    }

    pub fn spec(&self) -> Result<IntersectionSpec> {
        let ic = &self.intersection;
        let legs = match &ic.legs {
            Some(legs) => {
                let legs: [[u8; 2]; 4] = legs
                    .as_slice()
                    .try_into()
                    .map_err(|_| semantic("intersection.legs", "needs exactly 4 legs"))?;
                legs.map(|[through, left]| LegLanes { through, left })
            }
            None => {
                [LegLanes {
                    through: ic.through,
                    left: ic.left,
                }; 4]
            }
        };
        let mut spec = IntersectionSpec::from_legs(legs)
            .map_err(|e| semantic("intersection", e.to_string()))?;
        for &[leg, lane] in &ic.disabled {
            spec.disable_lane(LaneId::new(leg, lane))
                .map_err(|e| semantic("intersection.disabled", e.to_string()))?;
        }
        Ok(spec)
    }

    pub fn demand_of(&self, name: &str) -> Result<[f64; 8]> {
        let d = match name {
            "balanced" => BALANCED,
            "imbalanced" => IMBALANCED,
            "heavy" => HEAVY_APPROACH,
            "custom" => self
                .simulation
                .demand
                .ok_or_else(|| semantic("simulation.demand", "required for the custom scenario"))?,
            other => {
                return Err(semantic(
                    "simulation.scenario",
                    format!("unknown scenario `{other}`"),
                ))
            }
        };
        if d.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
            return Err(semantic("simulation.demand", "demand must be non-negative"));
        }
        Ok(d)
    }

    pub fn pattern(&self) -> ArrivalPattern {
        let s = &self.simulation;
        if s.pattern == "bursty" {
            ArrivalPattern::NonStationary {
                period: s.burst_period,
                burst: s.burst_length,
                ratio: s.burst_ratio,
            }
        } else {
            ArrivalPattern::Stationary
        }
    }

    pub fn segment_lengths(&self, n_l: u8) -> Result<SegmentLengths> {
        let r = &self.rhythm;
        let base = match r.segment_length {
            Some(l) => l,
            None => self.vehicle.v_max * min_gap_t(&self.vehicle)?,
        };
        Ok(SegmentLengths {
            cat2: r.cat2.unwrap_or(base),
            cat3: r.cat3.unwrap_or(base),
            cat4: r.cat4.unwrap_or(base),
            cat5: r.cat5.clone().unwrap_or_else(|| vec![base; n_l as usize]),
        })
    }

    /// Solved timing with any overrides applied.
    pub fn timing(&self, spec: &IntersectionSpec) -> Result<RhythmTiming> {
        let band = SpeedBand {
            lo: self.rhythm.min_speed,
            hi: self.vehicle.v_max,
        };
        let mut t = solve_travel_times(
            spec,
            &self.vehicle,
            &self.segment_lengths(spec.n_l())?,
            band,
        )?;
        let base = min_gap_t(&self.vehicle)?;
        let o = &self.rhythm.timing;
        if let Some(x) = o.t1 {
            t.t1 = x * base;
        }
        if let Some(x) = o.t2 {
            t.t2 = x * base;
        }
        if let Some(x) = o.t3 {
            t.t3 = x * base;
        }
        if let Some(x) = o.t4 {
            t.t4 = x * base;
        }
        if let Some(x) = &o.t5 {
            t.t5 = x.iter().map(|m| m * base).collect();
        }
        Ok(t)
    }
}

/// Parses and validates a TOML configuration.
pub fn parse_config(text: &str) -> Result<Config> {
    let config: Config = toml::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Parser)]
#[command(name = "rhythmic", about = "Rhythmic intersection control toolkit")]
struct Cli {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides `simulation.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve travel times and write the entry schedule and ROW profile.
    Rhythm,
    /// Check every conflict point; exits 1 on failure.
    Audit,
    /// Steady-state queue and delay over a load grid.
    Analyze,
    /// Speed curves for a stream of vehicles on one lane.
    Traj,
    /// One simulation run.
    Simulate,
    /// Scheme x scenario x alpha x replication grid.
    Sweep,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ConfigSyntax(_) | Error::ConfigSemantic { .. } => EXIT_CONFIG,
                _ => EXIT_RUNTIME,
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::ConfigSyntax(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.simulation.seed = seed;
    }
    Ok(config)
}

/// CSV writer whose first line records the config hash and seed.
fn csv_out(dir: &Path, name: &str, config: &Config) -> Result<csv::Writer<fs::File>> {
    fs::create_dir_all(dir)?;
    let mut file = fs::File::create(dir.join(name))?;
    writeln!(
        file,
        "# config_hash={} seed={}",
        config.hash(),
        config.simulation.seed
    )?;
    Ok(csv::Writer::from_writer(file))
}

fn execute(cli: &Cli) -> Result<i32> {
    let config = load_config(cli)?;
    let spec = config.spec()?;
    match cli.command {
        Command::Rhythm => cmd_rhythm(cli, &config, &spec),
        Command::Audit => cmd_audit(cli, &config, &spec),
        Command::Analyze => cmd_analyze(cli, &config),
        Command::Traj => cmd_traj(cli, &config, &spec),
        Command::Simulate => cmd_simulate(cli, &config, &spec),
        Command::Sweep => cmd_sweep(cli, &config, &spec),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.9}")
}

fn write_schedule(cli: &Cli, config: &Config, schedule: &EntrySchedule) -> Result<()> {
    let mut w = csv_out(&cli.out, "schedule.csv", config)?;
    w.write_record([
        "leg",
        "lane",
        "movement",
        "offset_s",
        "period_s",
        "schedulable",
    ])?;
    for l in &schedule.lanes {
        let movement = match l.movement {
            Movement::Through => "through",
            Movement::Left => "left",
        };
        w.write_record([
            l.lane.leg.to_string(),
            l.lane.lane.to_string(),
            movement.to_string(),
            fmt(l.offset),
            fmt(schedule.period),
            l.schedulable.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_rhythm(cli: &Cli, config: &Config, spec: &IntersectionSpec) -> Result<i32> {
    let timing = config.timing(spec)?;
    let schedule = entry_schedule(spec, &timing);
    write_schedule(cli, config, &schedule)?;
    let r = &config.rhythm;
    let profile = row_profile(&schedule, r.horizon, r.resolution, timing.t1)?;
    let mut w = csv_out(&cli.out, "row_profile.csv", config)?;
    let mut header = vec!["time_s".to_string()];
    header.extend(profile.intervals.iter().map(|(l, _)| l.to_string()));
    w.write_record(&header)?;
    for (s, &t) in profile.sample_times.iter().enumerate() {
        let mut row = vec![format!("{t:.6}")];
        row.extend(profile.occupied.iter().map(|o| (o[s] as u8).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    println!(
        "T1 = {:.9} s, T2 = {:.9} s, T3 = {:.9} s, T4 = {:.9} s, T5 = {:?}",
        timing.t1, timing.t2, timing.t3, timing.t4, timing.t5
    );
    println!(
        "period = {:.9} s, lanes = {}",
        schedule.period,
        schedule.lanes.len()
    );
    Ok(EXIT_OK)
}

fn cmd_audit(cli: &Cli, config: &Config, spec: &IntersectionSpec) -> Result<i32> {
    let timing = config.timing(spec)?;
    let report = audit(spec, &config.vehicle, &timing, config.rhythm.audit_window)?;
    fs::create_dir_all(&cli.out)?;
    let mut file = fs::File::create(cli.out.join("audit.csv"))?;
    writeln!(
        file,
        "# config_hash={} seed={}",
        config.hash(),
        config.simulation.seed
    )?;
    report.write_csv(file)?;
    let summary = report.summary();
    fs::write(cli.out.join("audit.txt"), &summary)?;
    print!("{summary}");
    Ok(if report.pass() {
        EXIT_OK
    } else {
        EXIT_AUDIT_FAIL
    })
}

fn cmd_analyze(cli: &Cli, config: &Config) -> Result<i32> {
    let t1 = min_gap_t(&config.vehicle)?;
    let a = &config.analyze;
    let mut w = csv_out(&cli.out, "analyze.csv", config)?;
    w.write_record([
        "load",
        "theta_veh_s",
        "p0",
        "residual",
        "mean_queue",
        "mean_delay_s",
        "poisson_delay_s",
        "delay_bound_s",
    ])?;
    let loads: Vec<f64> = match &a.probs {
        Some(p) => {
            let d = ArrivalDistribution::from_probs(p.clone(), t1)?;
            vec![d.load()]
        }
        None if a.steps == 1 => vec![a.load_min],
        None => (0..a.steps)
            .map(|i| a.load_min + (a.load_max - a.load_min) * i as f64 / (a.steps - 1) as f64)
            .collect(),
    };
    for load in loads {
        let theta = load / (2.0 * t1);
        let dist = match &a.probs {
            Some(p) => ArrivalDistribution::from_probs(p.clone(), t1)?,
            None => ArrivalDistribution::poisson(theta, t1)?,
        };
        let s = steady_state(&dist, 64, a.tolerance)?;
        let d = average_delay(&s, dist.theta, t1);
        let poisson = if a.probs.is_none() {
            fmt(poisson_delay(theta, t1)?)
        } else {
            String::new()
        };
        w.write_record([
            format!("{load:.6}"),
            fmt(theta),
            fmt(s.p0()),
            format!("{:.3e}", s.residual),
            fmt(d.mean_queue),
            fmt(d.mean_delay),
            poisson,
            fmt(delay_bound(theta, t1)?),
        ])?;
    }
    w.flush()?;
    println!("wrote {}", cli.out.join("analyze.csv").display());
    Ok(EXIT_OK)
}

fn cmd_traj(cli: &Cli, config: &Config, spec: &IntersectionSpec) -> Result<i32> {
    let tc = &config.traj;
    let timing = config.timing(spec)?;
    let schedule = entry_schedule(spec, &timing);
    let zone = AdjustmentZone::new(tc.zone_length, config.vehicle)?;
    let lane = LaneId::new(tc.leg, tc.lane);
    let entries = match &tc.entries {
        Some(e) => e.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.simulation.seed);
            let shift = config.vehicle.follow_headway();
            let horizon = 4.0 * (tc.vehicles as f64 + 10.0) * (1.0 / tc.rate + shift);
            let mut ts = gen_stationary(tc.rate, horizon, shift, &mut rng)?;
            ts.truncate(tc.vehicles);
            ts
        }
    };
    let mut curves: Vec<SpeedCurve> = Vec::new();
    for &t0 in &entries {
        let c = assign_curve(&zone, t0, curves.last(), &schedule, lane)?;
        curves.push(c);
    }
    let mut w = csv_out(&cli.out, "curves.csv", config)?;
    w.write_record([
        "vehicle",
        "t0_s",
        "ts_s",
        "te_s",
        "target_s",
        "shape",
        "min_speed_m_s",
    ])?;
    for (i, c) in curves.iter().enumerate() {
        let shape = match c.shape {
            CurveShape::Free => "free",
            CurveShape::Triangular => "triangular",
            CurveShape::Plateau => "plateau",
        };
        w.write_record([
            i.to_string(),
            fmt(c.t0),
            fmt(c.ts),
            fmt(c.te),
            fmt(c.target),
            shape.to_string(),
            fmt(c.dip),
        ])?;
    }
    w.flush()?;
    let mut w = csv_out(&cli.out, "trajectories.csv", config)?;
    w.write_record(["vehicle", "t_s", "x_m", "v_m_s"])?;
    for (i, c) in curves.iter().enumerate() {
        let n = ((c.target - c.t0) / tc.sample_step).ceil() as usize;
        for k in 0..=n {
            let t = (c.t0 + k as f64 * tc.sample_step).min(c.target);
            w.write_record([
                i.to_string(),
                format!("{t:.6}"),
                format!("{:.6}", c.position(t)),
                format!("{:.6}", c.speed(t)),
            ])?;
        }
    }
    w.flush()?;
    println!("{} curves on lane {lane}", curves.len());
    Ok(EXIT_OK)
}

fn sim_context(config: &Config, spec: &IntersectionSpec) -> Result<SimContext> {
    let timing = config.timing(spec)?;
    Ok(SimContext {
        schedule: entry_schedule(spec, &timing),
        spec: spec.clone(),
        vehicle: config.vehicle,
        timing,
        rc_systematic_delay: config.simulation.rc_systematic_delay,
        tsc: config.simulation.tsc,
        fcfs_tick: config.simulation.fcfs_tick,
    })
}

fn cmd_simulate(cli: &Cli, config: &Config, spec: &IntersectionSpec) -> Result<i32> {
    let s = &config.simulation;
    let ctx = sim_context(config, spec)?;
    let scenario = Scenario {
        name: s.scenario.clone(),
        demand: config.demand_of(&s.scenario)?,
        alpha: s.alpha,
        pattern: config.pattern(),
        duration: s.duration,
        seed: s.seed,
    };
    let run = ctx.run(s.scheme, &scenario)?;
    let mut w = csv_out(&cli.out, "vehicles.csv", config)?;
    w.write_record(["leg", "lane", "arrival_s", "entry_s", "delay_s"])?;
    for r in &run.records {
        w.write_record([
            r.lane.leg.to_string(),
            r.lane.lane.to_string(),
            fmt(r.arrival),
            fmt(r.entry),
            fmt(r.delay),
        ])?;
    }
    w.flush()?;
    let mut w = csv_out(&cli.out, "summary.csv", config)?;
    w.write_record([
        "scheme",
        "scenario",
        "alpha",
        "vehicles",
        "avg_delay_s",
        "throughput_veh",
        "residual_queue_veh",
    ])?;
    w.write_record([
        run.scheme.to_string(),
        scenario.name.clone(),
        format!("{}", scenario.alpha),
        run.records.len().to_string(),
        fmt(run.avg_delay),
        run.throughput.to_string(),
        run.residual_queue.to_string(),
    ])?;
    w.flush()?;
    println!(
        "{} {} alpha={}: avg delay {:.3} s, throughput {}, residual {}",
        run.scheme,
        scenario.name,
        scenario.alpha,
        run.avg_delay,
        run.throughput,
        run.residual_queue
    );
    Ok(EXIT_OK)
}

fn cmd_sweep(cli: &Cli, config: &Config, spec: &IntersectionSpec) -> Result<i32> {
    let s = &config.simulation;
    let ctx = sim_context(config, spec)?;
    let scenarios = s
        .scenarios
        .iter()
        .map(|name| {
            Ok(ScenarioTemplate {
                name: name.clone(),
                demand: config.demand_of(name)?,
                pattern: config.pattern(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = SweepGrid {
        schemes: s.schemes.clone(),
        scenarios,
        alphas: s.alphas.clone(),
        replications: s.replications,
        duration: s.duration,
        seed: s.seed,
    };
    let rows = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidScenario(e.to_string()))?
            .install(|| sweep(&ctx, &grid))?,
        None => sweep(&ctx, &grid)?,
    };
    let mut w = csv_out(&cli.out, "sweep.csv", config)?;
    w.write_record([
        "scheme",
        "scenario",
        "alpha",
        "replication",
        "seed",
        "avg_delay_s",
        "throughput_veh",
        "residual_queue_veh",
    ])?;
    for r in &rows {
        w.write_record([
            r.scheme.to_string(),
            r.scenario.clone(),
            format!("{}", r.alpha),
            r.replication.to_string(),
            r.seed.to_string(),
            fmt(r.avg_delay),
            r.throughput.to_string(),
            r.residual_queue.to_string(),
        ])?;
    }
    w.flush()?;
    println!(
        "{} runs written to {}",
        rows.len(),
        cli.out.join("sweep.csv").display()
    );
    Ok(EXIT_OK)
}
