use std::collections::BTreeMap;
use std::io::{self as stdio, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ctopo::io::{read_grid, read_grids, write_grid};
use ctopo::report::curves_csv;
use ctopo::{run_assess, run_cdmatrix, AnalysisReport, Dataset, Order, RunConfig, Selection, SnapshotManifest};
use ctopo_core::filters::{convolve, entropy, map_starting_edge_density, prune_rank, FilterId};
use ctopo_core::geometry::{geometric_matrix, random_symmetric, sample_point_cloud};
use ctopo_core::histogram::Histogram;
use ctopo_core::matrix::{symmetrize_add, symmetrize_max, FeatureMap, Kernel, RawImage, SymmetricMatrix};
use ctopo_core::topology::{betti_curves_of, DEFAULT_DIMENSION_GUARD, DEFAULT_SIMPLEX_BUDGET};

#[derive(Parser)]
#[command(
    name = "ctopo",
    version,
    about = "Clique-topology filter assessment and category distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Homology dimension.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Order::Desc)]
    order: Order,
    #[arg(long, default_value_t = 1)]
    bin_width: u64,
    /// Largest matrix side accepted.
    #[arg(long, default_value_t = DEFAULT_DIMENSION_GUARD, conflicts_with = "no_guard")]
    guard: usize,
    /// Accept matrices of any size.
    #[arg(long)]
    no_guard: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Upper bound on stored simplices per matrix.
    #[arg(long, default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    simplex_budget: u64,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            k: self.k,
            order: self.order,
            bin_width: self.bin_width,
            guard: (!self.no_guard).then_some(self.guard),
            seed: self.seed,
            simplex_budget: self.simplex_budget,
        }
    }
}

#[derive(Args)]
struct SelectArgs {
    /// Comma-separated category labels; all labels when omitted.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<u32>>,
    /// Use only the first N images of each category.
    #[arg(long)]
    per_class: Option<usize>,
}

impl SelectArgs {
    fn selection(&self) -> Selection {
        Selection {
            categories: self.classes.clone(),
            per_class: self.per_class,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Symmetrize {
    /// Input must already be symmetric.
    None,
    /// max(A, Aᵀ), for feature maps.
    Max,
    /// A + Aᵀ, for raw images.
    Add,
}

#[derive(Subcommand)]
enum Command {
    /// Betti curves of one matrix as CSV.
    Betti {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Symmetrize::None)]
        symmetrize: Symmetrize,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Starting edge density of each feature map, one per line.
    Sed {
        /// Text matrices or TFL1 tensors (rank 3 holds several maps).
        #[arg(required = true)]
        maps: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram entropy in bits of SED values read one per line (`none` for no hole).
    Entropy {
        /// `-` reads stdin.
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        bin_width: u64,
    },
    /// Score and rank filters over a snapshot series.
    Assess {
        #[arg(long)]
        manifest: PathBuf,
        /// IDX image file.
        #[arg(long)]
        data: PathBuf,
        /// IDX label file.
        #[arg(long)]
        labels: PathBuf,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        common: Common,
        /// Directory for report.json and curves/.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Category distance matrix and distinguishable degrees.
    Cdmatrix {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Valid-mode cross-correlation of an image with a kernel.
    Convolve {
        image: PathBuf,
        kernel: PathBuf,
        /// `.tfl` writes TFL1, anything else text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pruning order from an assess report, least effective first.
    PruneRank { report: PathBuf },
    /// Distance matrix of points drawn uniformly from the unit cube.
    GenGeometric {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symmetric matrix with i.i.d. uniform entries.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            stdio::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_matrix(out: Option<&Path>, m: &SymmetricMatrix) -> anyhow::Result<()> {
    let grid = m.clone().into_grid();
    match out {
        Some(p) => Ok(write_grid(p, &grid)?),
        None => emit(None, &ctopo::io::text::format_text_matrix(&grid)),
    }
}

fn emit_report(out: Option<&Path>, run: ctopo::RunOutput) -> anyhow::Result<()> {
    match out {
        Some(dir) => Ok(run.write_to(dir)?),
        None => emit(None, &run.report.to_json()),
    }
}

fn parse_sed_values(text: &str) -> anyhow::Result<Vec<Option<u64>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            if l.eq_ignore_ascii_case("none") {
                Ok(None)
            } else {
                l.parse().map(Some).with_context(|| format!("not a SED value: {l:?}"))
            }
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Betti {
            matrix,
            symmetrize,
            common,
            out,
        } => {
            let grid = read_grid(&matrix)?;
            let m = match symmetrize {
                Symmetrize::None => SymmetricMatrix::from_grid(grid)?,
                Symmetrize::Max => symmetrize_max(&FeatureMap::from_grid(grid)?)?,
                Symmetrize::Add => symmetrize_add(&RawImage::from_grid(grid)?)?,
            };
            let bc = betti_curves_of(&m, &common.config().topology())?;
            emit(out.as_deref(), &curves_csv(&bc))
        }
        Command::Sed { maps, common, out } => {
            let stat = common.config().statistic();
            stat.validate()?;
            let mut text = String::new();
            for path in &maps {
                for grid in read_grids(path)? {
                    let map = FeatureMap::from_grid(grid)?;
                    match map_starting_edge_density(&map, stat.k, &stat.topology)? {
                        Some(v) => text.push_str(&format!("{v}\n")),
                        None => text.push_str("none\n"),
                    }
                }
            }
            emit(out.as_deref(), &text)
        }
        Command::Entropy { input, bin_width } => {
            let mut text = String::new();
            if input.as_os_str() == "-" {
                stdio::stdin().read_to_string(&mut text)?;
            } else {
                text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            }
            let h = Histogram::from_observations(bin_width, parse_sed_values(&text)?)?;
            println!("{}", entropy(&h)?);
            Ok(())
        }
        Command::Assess {
            manifest,
            data,
            labels,
            select,
            common,
            out,
        } => {
            let manifest = SnapshotManifest::load(&manifest)?;
            let dataset = Dataset::load_idx(&data, &labels)?;
            let run = run_assess(&manifest, &dataset, &common.config(), &select.selection())?;
            emit_report(out.as_deref(), run)
        }
        Command::Cdmatrix {
            data,
            labels,
            select,
            common,
            out,
        } => {
            let dataset = Dataset::load_idx(&data, &labels)?;
            let run = run_cdmatrix(&dataset, &common.config(), &select.selection())?;
            emit_report(out.as_deref(), run)
        }
        Command::Convolve { image, kernel, out } => {
            let image = RawImage::from_grid(read_grid(&image)?)?;
            let kernel = Kernel::from_grid(read_grid(&kernel)?)?;
            let map = convolve(&image, &kernel)?.into_grid();
            match out {
                Some(p) => Ok(write_grid(&p, &map)?),
                None => emit(None, &ctopo::io::text::format_text_matrix(&map)),
            }
        }
        Command::PruneRank { report } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let AnalysisReport::Assess(a) = AnalysisReport::from_json(&text)? else {
                bail!("{} is not an assess report", report.display());
            };
            let scores: BTreeMap<FilterId, f64> = a.filters.iter().map(|f| (FilterId(f.filter), f.score)).collect();
            let rank = prune_rank(&scores)?;
            let mut text = String::from("filter,score\n");
            for id in &rank.prune_order {
                text.push_str(&format!("{},{}\n", id.0, scores[id]));
            }
            emit(None, &text)
        }
        Command::GenGeometric { n, d, seed, out } => {
            emit_matrix(out.as_deref(), &geometric_matrix(&sample_point_cloud(n, d, seed)?))
        }
        Command::GenRandom { n, seed, out } => emit_matrix(out.as_deref(), &random_symmetric(n, seed)?),
    }
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
