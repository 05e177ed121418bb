use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use warpband_core::nn::{parse_sweep_csv, SweepCsvRow};
use warpband_core::store::encode_matrix;
use warpband_core::{
    compute_matrix_with, constraint_sweep, graph_change, load_ucr_files, nn_graph, read_matrix,
    sha256_hex, znormalize, BandSpec, Dataset, MeasureConfig, Parallelism, Provenance,
    ResolvedBand, SweepFamily, SweepOptions,
};

use crate::args::{DistArgs, GraphDiffArgs, MatrixArgs, Metric, ReportArgs, SweepArgs};
use crate::output::{sanitize, Staged};

/// Everything that determines an artifact, in resolved form. Its JSON text
/// is copied into every output and its hash identifies the run.
#[derive(Debug, Serialize)]
struct RunConfig {
    command: &'static str,
    inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<MeasureConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<SweepFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<BandSpec>>,
    normalize: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repeat: Option<u32>,
    warmup: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    save_matrices: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric: Option<&'static str>,
}

impl RunConfig {
    fn new(command: &'static str, inputs: &[PathBuf]) -> Self {
        Self {
            command,
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            name: None,
            measure: None,
            family: None,
            schedule: None,
            normalize: false,
            threads: None,
            repeat: None,
            warmup: false,
            out: None,
            save_matrices: false,
            metric: None,
        }
    }

    fn provenance(&self) -> Provenance {
        let run_config = serde_json::to_string(self).expect("run config serializes");
        let run_hash = sha256_hex(run_config.as_bytes());
        Provenance {
            run_config,
            run_hash,
        }
    }
}

fn threads_label(p: Parallelism) -> String {
    match p {
        Parallelism::Auto => "auto".into(),
        Parallelism::Threads(n) => n.to_string(),
    }
}

fn load(inputs: &[PathBuf], name: Option<&str>, normalize: bool) -> Result<Dataset> {
    let mut d = load_ucr_files(inputs)?;
    if let Some(name) = name {
        d.name = name.to_string();
    }
    Ok(if normalize { d.znormalized() } else { d })
}

fn band_tag(band: BandSpec) -> String {
    match band {
        BandSpec::Unconstrained => "unconstrained".into(),
        BandSpec::Percent(p) => format!("p{p}"),
    }
}

fn artifact_stem(dataset: &str, config: &MeasureConfig) -> String {
    match config.band() {
        None => format!("{}_{}", sanitize(dataset), config.name()),
        Some(b) => format!("{}_{}_{}", sanitize(dataset), config.name(), band_tag(b)),
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

pub fn dist(args: &DistArgs) -> Result<()> {
    let band = args.measure.band.single()?;
    let config = args.measure.config(band)?;

    let (q, c) = if let [one] = args.inputs.as_slice() {
        let d = load_ucr_files(&[one])?;
        let (i, j) = args.ids.unwrap_or((0, 1));
        (pick(&d, i, one)?, pick(&d, j, one)?)
    } else {
        let (a, b) = (&args.inputs[0], &args.inputs[1]);
        let (i, j) = args.ids.unwrap_or((0, 0));
        (
            pick(&load_ucr_files(&[a])?, i, a)?,
            pick(&load_ucr_files(&[b])?, j, b)?,
        )
    };
    let (q, c) = if args.measure.normalize {
        (znormalize(&q), znormalize(&c))
    } else {
        (q, c)
    };

    let value = config.distance(&q, &c)?;
    let (n, m) = (q.len(), c.len());
    let radius = match config.radius_for(n.max(m)) {
        None => "none".to_string(),
        Some(r) => ResolvedBand::new(r, n, m).radius().to_string(),
    };
    println!("{value}");
    println!("radius={radius}");
    Ok(())
}

fn pick(d: &Dataset, id: usize, path: &Path) -> Result<warpband_core::TimeSeries> {
    d.series().get(id).cloned().ok_or_else(|| {
        anyhow!(
            "{}: series index {id} out of range ({} series)",
            path.display(),
            d.len()
        )
    })
}

pub fn matrix(args: &MatrixArgs) -> Result<()> {
    let band = args.measure.band.single()?;
    let config = args.measure.config(band)?;
    let dataset = load(&args.inputs, args.name.as_deref(), args.measure.normalize)?;

    let mut rc = RunConfig::new("matrix", &args.inputs);
    rc.name = Some(dataset.name.clone());
    rc.measure = Some(config);
    rc.normalize = args.measure.normalize;
    rc.threads = Some(threads_label(args.exec.threads));
    rc.repeat = Some(args.exec.repeat);
    rc.warmup = args.exec.warmup;
    rc.out = Some(args.out.display().to_string());

    let mut m = compute_matrix_with(&dataset, &config, &args.exec.options())?;
    m.provenance = Some(rc.provenance());

    let stem = artifact_stem(&dataset.name, &config);
    let mut staged = Staged::default();
    staged.add(args.out.join(format!("{stem}.wbm")), &encode_matrix(&m))?;
    staged.add(args.out.join(format!("{stem}.csv")), m.to_csv().as_bytes())?;
    let written = staged.commit()?;

    let percent = config.band().map(|b| b.to_string()).unwrap_or_default();
    println!("dataset,measure,percent,wall_ms");
    println!(
        "{},{},{percent},{}",
        dataset.name,
        config.name(),
        m.timing.wall_ms
    );
    report_written(&written);
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let family = args.measure.family()?;
    let schedule = args.measure.band.schedule();
    let dataset = load(&args.inputs, args.name.as_deref(), args.measure.normalize)?;

    let mut rc = RunConfig::new("sweep", &args.inputs);
    rc.name = Some(dataset.name.clone());
    rc.family = Some(family);
    rc.schedule = Some(schedule.clone());
    rc.normalize = args.measure.normalize;
    rc.threads = Some(threads_label(args.exec.threads));
    rc.repeat = Some(args.exec.repeat);
    rc.warmup = args.exec.warmup;
    rc.out = Some(args.out.display().to_string());
    rc.save_matrices = args.save_matrices;
    let provenance = rc.provenance();

    let opts = SweepOptions {
        compute: args.exec.options(),
        keep_matrices: args.save_matrices,
    };
    let mut result = constraint_sweep(&dataset, family, &schedule, &opts)?;
    result.report.provenance = Some(provenance.clone());

    let stem = format!("{}_{}", sanitize(&dataset.name), family.name());
    let csv = result.report.to_csv();
    let mut staged = Staged::default();
    staged.add(args.out.join(format!("{stem}_sweep.csv")), csv.as_bytes())?;
    staged.add(
        args.out.join(format!("{stem}_sweep.json")),
        result.report.to_json().as_bytes(),
    )?;
    for m in &mut result.matrices {
        m.provenance = Some(provenance.clone());
        staged.add(
            args.out
                .join(format!("{}.wbm", artifact_stem(&dataset.name, &m.config))),
            &encode_matrix(m),
        )?;
    }
    let written = staged.commit()?;

    print!("{csv}");
    report_written(&written);
    Ok(())
}

pub fn graph_diff(args: &GraphDiffArgs) -> Result<()> {
    let a = read_matrix(&args.left)?;
    let b = read_matrix(&args.right)?;
    let change = graph_change(&nn_graph(&a), &nn_graph(&b))?;
    println!("{change}");
    Ok(())
}

/// One table row per (dataset, family), one column per band.
pub fn report(args: &ReportArgs) -> Result<()> {
    let mut rows: Vec<SweepCsvRow> = Vec::new();
    for path in &args.inputs {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        rows.extend(parse_sweep_csv(&text, &path.display().to_string())?);
    }

    let mut bands: Vec<BandSpec> = Vec::new();
    let mut keys: Vec<(String, String)> = Vec::new();
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for r in &rows {
        if args.metric == Metric::Change && r.band == BandSpec::Unconstrained {
            continue;
        }
        let key = (r.dataset.clone(), r.family.clone());
        let k = keys.iter().position(|x| *x == key).unwrap_or_else(|| {
            keys.push(key);
            keys.len() - 1
        });
        let b = bands.iter().position(|x| *x == r.band).unwrap_or_else(|| {
            bands.push(r.band);
            bands.len() - 1
        });
        let v = match args.metric {
            Metric::Change => r.change_percent,
            Metric::WallMs => r.wall_ms,
        };
        if let Some(old) = cells.insert((k, b), v) {
            if old.to_bits() != v.to_bits() {
                bail!(
                    "conflicting values for {} {} at {}: {old} vs {v}",
                    r.dataset,
                    r.family,
                    r.band
                );
            }
        }
    }

    // Widest band first, as in the schedule.
    let mut order: Vec<usize> = (0..bands.len()).collect();
    order.sort_by(|&a, &b| band_key(bands[b]).total_cmp(&band_key(bands[a])));

    let mut rc = RunConfig::new("report", &args.inputs);
    rc.metric = Some(match args.metric {
        Metric::Change => "change",
        Metric::WallMs => "wall_ms",
    });
    rc.out = args.out.as_ref().map(|p| p.display().to_string());
    let hash = rc.provenance().run_hash;

    let mut out = String::from("dataset,family");
    for &b in &order {
        write!(out, ",{}", bands[b]).unwrap();
    }
    out.push_str(",run_hash\n");
    for (k, (dataset, family)) in keys.iter().enumerate() {
        write!(out, "{dataset},{family}").unwrap();
        for &b in &order {
            match cells.get(&(k, b)) {
                Some(v) => write!(out, ",{v}").unwrap(),
                None => out.push(','),
            }
        }
        writeln!(out, ",{hash}").unwrap();
    }

    if let Some(path) = &args.out {
        let mut staged = Staged::default();
        staged.add(path.clone(), out.as_bytes())?;
        report_written(&staged.commit()?);
    }
    print!("{out}");
    Ok(())
}

fn band_key(b: BandSpec) -> f64 {
    match b {
        BandSpec::Unconstrained => f64::INFINITY,
        BandSpec::Percent(p) => p,
    }
}
