use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use recex_core::decompose::{
    decompose_involution, decompose_shuffles_with_budget, grid_to_grid_decompose,
};
use recex_core::doc::{Document, Factor, Payload};
use recex_core::flip::{flip_embed, flip_unembed, FlipMap};
use recex_core::invariants::{
    extend_to_ambient_with_budget, is_in_derived, is_in_gtg, rec_isomorphism_with_budget, saf,
    vol_tensor_in, IsoOutcome,
};
use recex_core::lattice::fundamental_domain;
use recex_core::qfree::{
    refine_grid_qfree_with_budget, simplicial_refine_with_budget, DEFAULT_SEARCH_BUDGET,
};
use recex_core::random::{parse_symbol_spec, Sampler};
use recex_core::scalar::DEFAULT_MAX_PRECISION_BITS;
use recex_core::selftest;
use recex_core::svg::{render_recmap, render_rects};
use recex_core::{Error, GridPattern, Multirect, RecMap, RectPartition};

#[derive(Parser)]
#[command(
    name = "recex",
    version,
    about = "Exact computations with rectangle exchange transformations"
)]
struct Cli {
    /// Cap on the working precision used to decide signs involving opaque symbols.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PRECISION_BITS)]
    max_precision_bits: u32,
    /// Node budget for the exhaustive refinement search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    search_budget: u64,
    /// Seed for random generation and the self test.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Shuffles,
    Involution,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// A ∘ B (B acts first).
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    Invert {
        a: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Pointwise equality of two maps.
    Equal { a: PathBuf, b: PathBuf },
    /// Checks the partition conditions of a map.
    Validate { a: PathBuf },
    /// Generalized SAF invariant of a map.
    Saf {
        a: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Tensor volume of a multirectangle.
    Vol {
        m: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Membership in the derived subgroup.
    Derived { a: PathBuf },
    /// Membership in the subgroup generated by IET lifts and transpositions.
    Gtg { a: PathBuf },
    /// Piecewise translation between two multirectangles of equal tensor volume.
    Iso {
        m1: PathBuf,
        m2: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Extends an isomorphism M1 -> M2 to a map of M.
    Extend {
        phi: PathBuf,
        m: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Factors a map.
    Decompose {
        a: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Shuffles)]
        mode: Mode,
        /// Grid for `--mode grid`; defaults to a Q-free refinement of the domains.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Simplicial refinement of a list of positive scalars.
    Qfree {
        s: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Setwise Q-free refinement of a grid.
    RefineGrid {
        q: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Fundamental domain of a lattice and its tensor volume.
    Fd {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        r0: Option<PathBuf>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Embeds a flip map of [0,1)^d into the rectangle exchanges of [-1,1)^d.
    FlipEmbed {
        f: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    FlipUnembed {
        g: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Seeded random map of the unit cube.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 6)]
        pieces: usize,
        /// Comma separated symbols, e.g. `sqrt2,sqrt3` or `g=0.5772156649:10`.
        #[arg(long, default_value = "sqrt2")]
        symbols: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// SVG drawing of a planar map, multirectangle or grid.
    Render {
        a: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Runs the acceptance checks and prints a scoreboard.
    Selftest {
        #[arg(long)]
        filter: Option<String>,
    },
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

struct Ctx {
    precision: u32,
    budget: u64,
}

impl Ctx {
    fn load(&self, path: &Path) -> Result<Document, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Document::parse_with_precision(&text, self.precision).map_err(|e| match e {
            Error::Parse { location, message } => {
                Failure::Input(format!("{}: {location}: {message}", path.display()))
            }
            other => Failure::Input(format!("{}: {other}", path.display())),
        })
    }

    fn recmap(&self, path: &Path) -> Result<RecMap, Failure> {
        match self.load(path)?.payload {
            Payload::RecMap(f) => Ok(f),
            Payload::Factors { ambient, factors } => {
                let maps = factors
                    .iter()
                    .map(|x| x.to_recmap(&ambient))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(RecMap::compose_all(&ambient, &maps)?)
            }
            other => Err(wrong_kind(path, "recmap", other.kind())),
        }
    }

    fn multirect(&self, path: &Path) -> Result<Multirect, Failure> {
        match self.load(path)?.payload {
            Payload::Multirect(m) => Ok(m),
            Payload::Rect(r) => Ok(Multirect::single(r)),
            other => Err(wrong_kind(path, "multirect", other.kind())),
        }
    }
}

fn wrong_kind(path: &Path, expected: &str, found: &str) -> Failure {
    Failure::Input(format!(
        "{}: expected a `{expected}` document, found `{found}`",
        path.display()
    ))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_doc(doc: &Document, out: Option<&Path>) -> Outcome {
    emit(&doc.to_text(), out)?;
    Ok(ExitCode::SUCCESS)
}

fn verdict(holds: bool, yes: &str, no: &str) -> Outcome {
    println!("{}", if holds { yes } else { no });
    Ok(if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn recmap_doc(f: &RecMap) -> Result<Document, Failure> {
    Ok(Document::recmap(f)?)
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        precision: cli.max_precision_bits,
        budget: cli.search_budget,
    };
    match cli.command {
        Command::Compose { a, b, o } => {
            let f = ctx.recmap(&a)?;
            let g = ctx.recmap(&b)?;
            emit_doc(&recmap_doc(&f.compose(&g)?)?, o.as_deref())
        }
        Command::Invert { a, o } => {
            emit_doc(&recmap_doc(&ctx.recmap(&a)?.inverse())?, o.as_deref())
        }
        Command::Equal { a, b } => {
            let (x, y) = (ctx.load(&a)?, ctx.load(&b)?);
            let same = match (x.payload, y.payload) {
                (Payload::FlipMap(f), Payload::FlipMap(g)) => f.equals(&g)?,
                _ => ctx.recmap(&a)?.equals(&ctx.recmap(&b)?)?,
            };
            verdict(same, "true", "false")
        }
        Command::Validate { a } => {
            // Loading already checks the invariants of every payload kind.
            let text = fs::read_to_string(&a)
                .map_err(|e| Failure::Input(format!("{}: {e}", a.display())))?;
            match Document::parse_with_precision(&text, ctx.precision) {
                Ok(doc) => verdict(true, &format!("valid {}", doc.payload.kind()), ""),
                Err(Error::Parse { location, message }) => {
                    verdict(false, "", &format!("invalid: {location}: {message}"))
                }
                Err(
                    e @ (Error::PrecisionExhausted { .. } | Error::SearchBudgetExceeded { .. }),
                ) => Err(e.into()),
                Err(e) => verdict(false, "", &format!("invalid: {e}")),
            }
        }
        Command::Saf { a, o } => {
            let f = ctx.recmap(&a)?;
            let t = f
                .table()
                .cloned()
                .ok_or_else(|| Failure::Input("empty map".into()))?;
            emit_doc(
                &Document::new(&t, Some(f.dim()), Payload::Saf(saf(&f)?)),
                o.as_deref(),
            )
        }
        Command::Vol { m, o } => {
            let doc = ctx.load(&m)?;
            let set = ctx.multirect(&m)?;
            emit_doc(
                &Document::new(
                    &doc.table,
                    None,
                    Payload::Tensor(vol_tensor_in(&doc.table, &set)),
                ),
                o.as_deref(),
            )
        }
        Command::Derived { a } => verdict(is_in_derived(&ctx.recmap(&a)?)?, "true", "false"),
        Command::Gtg { a } => verdict(is_in_gtg(&ctx.recmap(&a)?)?, "true", "false"),
        Command::Iso { m1, m2, o } => {
            let doc = ctx.load(&m1)?;
            let (x, y) = (ctx.multirect(&m1)?, ctx.multirect(&m2)?);
            match rec_isomorphism_with_budget(&x, &y, ctx.budget)? {
                IsoOutcome::Isomorphic(phi) => emit_doc(
                    &Document::new(&doc.table, Some(x.dim()), Payload::Isomorphism(phi)),
                    o.as_deref(),
                ),
                IsoOutcome::NotIsomorphic { source, target } => {
                    println!("not isomorphic");
                    println!("source volume: {}", source.to_json());
                    println!("target volume: {}", target.to_json());
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Extend { phi, m, o } => {
            let iso = match ctx.load(&phi)?.payload {
                Payload::Isomorphism(i) => i,
                other => return Err(wrong_kind(&phi, "isomorphism", other.kind())),
            };
            let ambient = ctx.multirect(&m)?;
            emit_doc(
                &recmap_doc(&extend_to_ambient_with_budget(&iso, &ambient, ctx.budget)?)?,
                o.as_deref(),
            )
        }
        Command::Decompose { a, mode, grid, o } => {
            let f = ctx.recmap(&a)?;
            let t = f
                .table()
                .cloned()
                .ok_or_else(|| Failure::Input("empty map".into()))?;
            let factors: Vec<Factor> = match mode {
                Mode::Shuffles => {
                    let out = decompose_shuffles_with_budget(&f, ctx.budget)?;
                    eprintln!(
                        "{} shuffles; complexity trace {:?}; split transpositions {}",
                        out.factors.len(),
                        out.complexity_trace,
                        out.split_transpositions
                    );
                    out.factors.into_iter().map(Factor::Shuffle).collect()
                }
                Mode::Involution => decompose_involution(&f)?
                    .into_iter()
                    .map(Factor::Transposition)
                    .collect(),
                Mode::Grid => {
                    let q = match grid {
                        Some(p) => match ctx.load(&p)?.payload {
                            Payload::Grid(g) => g,
                            other => return Err(wrong_kind(&p, "grid", other.kind())),
                        },
                        None => {
                            let domains = RectPartition::new(
                                f.ambient().clone(),
                                f.pieces().iter().map(|p| p.rect.clone()).collect(),
                            )?;
                            refine_grid_qfree_with_budget(
                                &GridPattern::refining(&domains)?,
                                ctx.budget,
                            )?
                        }
                    };
                    grid_to_grid_decompose(&f, &q)?
                        .into_iter()
                        .map(Factor::Shuffle)
                        .collect()
                }
            };
            emit_doc(
                &Document::new(
                    &t,
                    Some(f.dim()),
                    Payload::Factors {
                        ambient: f.ambient().clone(),
                        factors,
                    },
                ),
                o.as_deref(),
            )
        }
        Command::Qfree { s, o } => {
            let doc = ctx.load(&s)?;
            let values = match doc.payload {
                Payload::Scalars(v) => v,
                other => return Err(wrong_kind(&s, "scalars", other.kind())),
            };
            let r = simplicial_refine_with_budget(&values, ctx.budget)?;
            emit_doc(
                &Document::new(&doc.table, None, Payload::Refinement(r)),
                o.as_deref(),
            )
        }
        Command::RefineGrid { q, o } => {
            let doc = ctx.load(&q)?;
            let g = match doc.payload {
                Payload::Grid(g) => g,
                other => return Err(wrong_kind(&q, "grid", other.kind())),
            };
            let fine = refine_grid_qfree_with_budget(&g, ctx.budget)?;
            emit_doc(
                &Document::new(&doc.table, Some(fine.dim()), Payload::Grid(fine)),
                o.as_deref(),
            )
        }
        Command::Fd { lattice, r0, o } => {
            let doc = ctx.load(&lattice)?;
            let l = match doc.payload {
                Payload::Lattice(l) => l,
                other => return Err(wrong_kind(&lattice, "lattice", other.kind())),
            };
            let start = match r0 {
                Some(p) => match ctx.load(&p)?.payload {
                    Payload::Rect(r) => Some(r),
                    other => return Err(wrong_kind(&p, "rect", other.kind())),
                },
                None => None,
            };
            let fd = fundamental_domain(&l, start.as_ref())?;
            let volume = vol_tensor_in(&doc.table, &fd.domain);
            let payload = Payload::Domain {
                start: fd.start,
                domain: fd.domain,
                volume,
                report: fd.report,
            };
            emit_doc(
                &Document::new(&doc.table, Some(l.dim()), payload),
                o.as_deref(),
            )
        }
        Command::FlipEmbed { f, o } => {
            let doc = ctx.load(&f)?;
            let map = match doc.payload {
                Payload::FlipMap(m) => m,
                Payload::RecMap(m) => FlipMap::from_recmap(&m),
                other => return Err(wrong_kind(&f, "flipmap", other.kind())),
            };
            emit_doc(&recmap_doc(&flip_embed(&map)?)?, o.as_deref())
        }
        Command::FlipUnembed { g, o } => {
            let doc = ctx.load(&g)?;
            let map = ctx.recmap(&g)?;
            let f = flip_unembed(&map)?;
            emit_doc(
                &Document::new(&doc.table, Some(f.dim()), Payload::FlipMap(f)),
                o.as_deref(),
            )
        }
        Command::Random {
            dim,
            pieces,
            symbols,
            o,
        } => {
            if dim == 0 {
                return Err(Failure::Input("--dim must be at least 1".into()));
            }
            if pieces == 0 {
                return Err(Failure::Input("--pieces must be at least 1".into()));
            }
            let table = parse_symbol_spec(&symbols)?.with_precision_cap(ctx.precision);
            let f = Sampler::new(&table, cli.seed).recmap(dim, pieces)?;
            emit_doc(&recmap_doc(&f)?, o.as_deref())
        }
        Command::Render { a, o } => {
            let doc = ctx.load(&a)?;
            let svg = match doc.payload {
                Payload::RecMap(f) => render_recmap(&f)?,
                Payload::Multirect(m) => render_rects(m.pieces())?,
                Payload::Grid(g) => render_rects(&g.cells())?,
                other => return Err(wrong_kind(&a, "recmap, multirect or grid", other.kind())),
            };
            emit(&svg, Some(&o))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { filter } => {
            let config = selftest::Config {
                seed: cli.seed,
                search_budget: ctx.budget,
                max_precision_bits: ctx.precision,
            };
            let outcomes = selftest::run(&config, filter.as_deref());
            for o in &outcomes {
                println!("{}", o.line());
            }
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            println!("{passed}/{} criteria passed", outcomes.len());
            Ok(if passed == outcomes.len() && !outcomes.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::PrecisionExhausted { .. } => 3,
                Error::SearchBudgetExceeded { .. } => 4,
                _ => 2,
            })
        }
    }
}
