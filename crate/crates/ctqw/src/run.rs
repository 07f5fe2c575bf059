//! Executes a [`RunConfig`]: computes the requested quantities and writes
//! CSV, JSON and (optionally) PNG artifacts under `config.out`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use ctqw_core::analysis::{asymmetry, marginals, EnsembleResult};
use ctqw_core::netgen::NetworkSpec;
use ctqw_core::spectral::{self, bloch_spectrum, class_ids, degeneracy_classes, SpectralData};
use ctqw_core::wigner::{
    field_for_network, limiting_wigner_general, wigner_general, TimeTag, WignerField,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::format::{self, config_meta, field_meta, write_atomic, Meta};
use crate::parallel;
use crate::render::{self, HeatmapOptions};

/// Evaluates fields for one network, diagonalising at most once.
enum Evaluator {
    Circulant(NetworkSpec),
    General {
        spec: NetworkSpec,
        spectral: SpectralData,
    },
}

impl Evaluator {
    fn new(spec: NetworkSpec, tol: Option<f64>) -> Result<Self> {
        if spec.is_circulant() {
            return Ok(Evaluator::Circulant(spec));
        }
        let network = spec.build()?;
        let mut spectral = spectral::eigendecompose(&network.hamiltonian)?;
        if let Some(tol) = tol {
            spectral = spectral.with_tolerance(tol);
        }
        Ok(Evaluator::General { spec, spectral })
    }

    fn field(&self, j: usize, time: TimeTag, tol: Option<f64>) -> Result<WignerField> {
        let field = match self {
            Evaluator::Circulant(spec) => field_for_network(spec, j, time, tol)?,
            Evaluator::General { spec, spectral } => match time {
                TimeTag::At(t) => wigner_general(spectral, j, t)?,
                TimeTag::Limit => limiting_wigner_general(spectral, j)?,
            }
            .with_network(*spec),
        };
        Ok(field)
    }
}

struct Writer<'a> {
    config: &'a RunConfig,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.config.out.join(name)
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.path(name);
        write_atomic(&path, body.as_bytes())?;
        self.written.push(path);
        Ok(())
    }

    fn png(&mut self, name: &str, img: &image::RgbImage) -> Result<()> {
        if !self.config.png {
            return Ok(());
        }
        let path = self.path(name);
        render::save_png(img, &path)?;
        self.written.push(path);
        Ok(())
    }

    fn heatmap_options(&self) -> HeatmapOptions {
        HeatmapOptions {
            cell: self.config.cell,
            vmax: self.config.vmax,
        }
    }
}

fn meta_for(config: &RunConfig, field: &WignerField) -> Meta {
    let mut meta = config_meta(config);
    meta.extend(field_meta(field));
    meta
}

/// Runs the configured command and returns the files it wrote.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    std::fs::create_dir_all(&config.out).map_err(|e| CliError::io(&config.out, e))?;
    let pool = parallel::pool_from_env()?;
    let mut writer = Writer {
        config,
        written: Vec::new(),
    };
    match config.command {
        Command::Spectrum => run_spectrum(&mut writer)?,
        Command::Wigner | Command::Limit => run_fields(&mut writer, &pool)?,
        Command::Marginal => run_marginal(&mut writer, &pool)?,
        Command::Asymmetry => run_asymmetry(&mut writer, &pool)?,
        Command::Ensemble => run_ensemble(&mut writer, &pool)?,
    }
    Ok(writer.written)
}

fn time_suffix(time: TimeTag) -> String {
    match time {
        TimeTag::At(t) => format!("_t{t}"),
        TimeTag::Limit => String::new(),
    }
}

/// Requested fields: one per `--t`, or the long-time limit when none given.
fn compute_fields(config: &RunConfig, pool: &rayon::ThreadPool) -> Result<Vec<WignerField>> {
    let evaluator = Evaluator::new(config.network()?, config.tol)?;
    let j = config.initial_node();
    let times: Vec<TimeTag> = if config.times.is_empty() {
        vec![TimeTag::Limit]
    } else {
        config.times.iter().map(|&t| TimeTag::At(t)).collect()
    };
    pool.install(|| {
        times
            .par_iter()
            .map(|&time| evaluator.field(j, time, config.tol))
            .collect()
    })
}

fn run_fields(w: &mut Writer, pool: &rayon::ThreadPool) -> Result<()> {
    let stem = w.config.command.name();
    for field in compute_fields(w.config, pool)? {
        let meta = meta_for(w.config, &field);
        let name = format!("{stem}{}", time_suffix(field.time()));
        w.text(&format!("{name}.csv"), &format::field_csv(&field, &meta))?;
        w.text(&format!("{name}.json"), &format::field_json(&field, &meta))?;
        let img = render::render_field(&field, w.heatmap_options());
        w.png(&format!("{name}.png"), &img)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MarginalJson<'a> {
    meta: BTreeMap<String, String>,
    chi: &'a [f64],
    k_marginal: &'a [f64],
}

fn run_marginal(w: &mut Writer, pool: &rayon::ThreadPool) -> Result<()> {
    for field in compute_fields(w.config, pool)? {
        let meta = meta_for(w.config, &field);
        let report = marginals(&field);
        let name = format!("marginal{}", time_suffix(field.time()));
        let csv = format::columns_csv(
            "index",
            &[("chi", &report.chi), ("k_marginal", &report.k_marginal)],
            &meta,
        );
        w.text(&format!("{name}.csv"), &csv)?;
        let doc = MarginalJson {
            meta: meta.iter().cloned().collect(),
            chi: &report.chi,
            k_marginal: &report.k_marginal,
        };
        w.text(&format!("{name}.json"), &to_json(&doc))?;
        let img = render::render_field(&field, w.heatmap_options());
        w.png(&format!("{name}.png"), &img)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AsymmetryJson<'a> {
    meta: BTreeMap<String, String>,
    dx: Vec<&'a [f64]>,
    dk: Vec<&'a [f64]>,
    chi_asym: &'a [f64],
}

fn run_asymmetry(w: &mut Writer, pool: &rayon::ThreadPool) -> Result<()> {
    for field in compute_fields(w.config, pool)? {
        let meta = meta_for(w.config, &field);
        let map = asymmetry(&field)?;
        let name = format!("asymmetry{}", time_suffix(field.time()));
        w.text(
            &format!("{name}_dx.csv"),
            &format::grid_csv(&map.dx, "x", &meta),
        )?;
        w.text(
            &format!("{name}_dk.csv"),
            &format::grid_csv(&map.dk, "x", &meta),
        )?;
        w.text(
            &format!("{name}_chi.csv"),
            &format::columns_csv("x", &[("chi_asym", &map.chi_asym)], &meta),
        )?;
        let doc = AsymmetryJson {
            meta: meta.iter().cloned().collect(),
            dx: map.dx.values.chunks(map.dx.cols).collect(),
            dk: map.dk.values.chunks(map.dk.cols).collect(),
            chi_asym: &map.chi_asym,
        };
        w.text(&format!("{name}.json"), &to_json(&doc))?;
        let opts = w.heatmap_options();
        w.png(
            &format!("{name}_dx.png"),
            &render::render_grid(&map.dx, opts),
        )?;
        w.png(
            &format!("{name}_dk.png"),
            &render::render_grid(&map.dk, opts),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    meta: BTreeMap<String, String>,
    eigenvalues: &'a [f64],
    class_id: &'a [usize],
    classes: &'a [Vec<usize>],
}

fn run_spectrum(w: &mut Writer) -> Result<()> {
    let config = w.config;
    let spec = config.network()?;
    let network = spec.build()?;
    let (eigenvalues, indexing) = if spec.is_circulant() {
        (bloch_spectrum(spec.ring).energies, "bloch")
    } else {
        let s = spectral::eigendecompose(&network.hamiltonian)?;
        (s.eigenvalues().to_vec(), "ascending")
    };
    let tol = config
        .tol
        .unwrap_or_else(|| spectral::default_tolerance(&eigenvalues));
    let classes = degeneracy_classes(&eigenvalues, tol);
    let ids = class_ids(&classes, eigenvalues.len());

    let mut meta = config_meta(config);
    meta.push(("N".into(), spec.ring.n().to_string()));
    meta.push(("m".into(), spec.ring.m().to_string()));
    format::disorder_meta(&mut meta, &spec.disorder);
    meta.push(("indexing".into(), indexing.into()));
    meta.push(("tol".into(), tol.to_string()));
    meta.push(("classes".into(), classes.len().to_string()));
    meta.push(("connected".into(), network.is_connected().to_string()));
    meta.push((
        "skipped_rewirings".into(),
        network.skipped_rewirings.to_string(),
    ));

    w.text(
        "spectrum.csv",
        &format::spectrum_csv(&eigenvalues, &ids, &meta),
    )?;
    let doc = SpectrumJson {
        meta: meta.iter().cloned().collect(),
        eigenvalues: &eigenvalues,
        class_id: &ids,
        classes: &classes,
    };
    w.text("spectrum.json", &to_json(&doc))?;
    w.text("graph.csv", &format::graph_csv(&network.graph))?;
    w.text(
        "hamiltonian.csv",
        &format::hamiltonian_csv(&network.hamiltonian),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct EnsembleJson<'a> {
    meta: BTreeMap<String, String>,
    n_realizations: usize,
    base_seed: u64,
    prng: &'a str,
    connected: &'a [bool],
    skipped_rewirings: &'a [usize],
    mean_chi: &'a [f64],
    #[serde(rename = "N")]
    n: usize,
    values: Vec<&'a [f64]>,
}

fn ensemble_meta(config: &RunConfig, result: &EnsembleResult) -> Meta {
    let mut meta = meta_for(config, &result.mean_field);
    meta.push(("n_realizations".into(), result.n_realizations.to_string()));
    meta.push(("base_seed".into(), result.base_seed.to_string()));
    let connected = result.connected.iter().filter(|&&c| c).count();
    meta.push(("connected_realizations".into(), connected.to_string()));
    meta
}

fn run_ensemble(w: &mut Writer, pool: &rayon::ThreadPool) -> Result<()> {
    let config = w.config;
    let result = parallel::ensemble_average(pool, &config.ensemble()?)?;
    let meta = ensemble_meta(config, &result);
    let field = &result.mean_field;
    w.text("ensemble.csv", &format::field_csv(field, &meta))?;
    w.text(
        "ensemble_chi.csv",
        &format::columns_csv("x", &[("mean_chi", &result.mean_chi)], &meta),
    )?;
    let doc = EnsembleJson {
        meta: meta.iter().cloned().collect(),
        n_realizations: result.n_realizations,
        base_seed: result.base_seed,
        prng: result.prng,
        connected: &result.connected,
        skipped_rewirings: &result.skipped_rewirings,
        mean_chi: &result.mean_chi,
        n: field.n(),
        values: (0..field.n()).map(|x| field.row(x)).collect(),
    };
    w.text("ensemble.json", &to_json(&doc))?;
    let img = render::render_field(field, w.heatmap_options());
    w.png("ensemble.png", &img)?;
    Ok(())
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string(doc).expect("report serialises");
    s.push('\n');
    s
}
