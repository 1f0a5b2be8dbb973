//! Batch front-end: ingest space/module/filter documents, run an
//! operation or the whole theorem suite, emit machine-readable JSON.
//!
//! Exit codes: 0 on success, 1 on invalid input documents, 2 when `check`
//! finds a property violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lawvere::completion::{
    complete, semi_hausdorff, specialization_dot, CompletionKind, UniversalPropertyLimits,
};
use lawvere::doc::{
    self, completion_to_doc, filter_from_doc, functor_from_doc, module_from_doc, module_to_doc,
    sequence_from_doc, space_from_doc, to_json_pretty, AnyModule, Document,
};
use lawvere::flatness::{
    is_aleph_flat, is_left_adjoint, is_p1_flat, sampled_lattice_check, FlatnessClass,
    LatticeCheckConfig,
};
use lawvere::module::{compose, left_kan_extension, right_adjoint_candidate};
use lawvere::preorder::{check_dcpo_universal_property, hasse_dot, ideal_completion, poset_reflection};
use lawvere::suite::{run_suite, RunConfig};
use lawvere::{Aleph, CostValue, Error};

#[derive(Parser)]
#[command(
    name = "lawvere",
    version,
    about = "Exact computations on finite quasi-metric spaces and preorders: validation, flatness, filters, completions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a space, module, filter, sequence, or functor document.
    Validate {
        /// Input document (JSON).
        file: PathBuf,
    },
    /// Classify a module document in the flatness hierarchy.
    Flat {
        /// Module document.
        file: PathBuf,
        /// Family size cap for the lattice cross-check.
        #[arg(long, default_value_t = 4)]
        family_cap: usize,
        /// Budget for the lattice cross-check; omit to run it exhaustively.
        #[arg(long)]
        max_instances: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a completion of a space document.
    Complete {
        /// Space document.
        file: PathBuf,
        /// Completion kind: type1, type-omega, type-aleph_<k>, or cauchy.
        #[arg(long)]
        kind: String,
        /// Also write the specialization preorder as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-sided max-min distance between two subsets of a space.
    Distance {
        /// Space document.
        file: PathBuf,
        /// Comma-separated object names of the source subset.
        #[arg(long = "from")]
        from: String,
        /// Comma-separated object names of the target subset.
        #[arg(long = "to")]
        to: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Left Kan extension of a module document along a functor document.
    Kan {
        /// Left module document.
        file: PathBuf,
        /// Functor document whose source is the module's space.
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Representative of a filter document, if any.
    Rep {
        /// Filter document.
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ideal completion of a preorder document.
    IdealComplete {
        /// Boolean space document.
        file: PathBuf,
        /// Cardinal tag; inert on finite instances.
        #[arg(long, default_value = "omega")]
        aleph: String,
        /// Also write the Hasse diagram of the result as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Poset reflection of a preorder document.
    Reflect {
        /// Boolean space document.
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the dcpo universal property for a pair of preorders.
    CheckDcpo {
        /// Source preorder document.
        a: PathBuf,
        /// Target preorder document.
        b: PathBuf,
        /// Size bound on both preorders.
        #[arg(long, default_value_t = 4)]
        max_objects: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the theorem suite over seeded instances.
    Check {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_objects: usize,
        /// Comma-separated cost grid, e.g. `0,1/2,1,inf`.
        #[arg(long)]
        grid: Option<String>,
        /// Number of generated spaces.
        #[arg(long, default_value_t = 40)]
        spaces: usize,
        /// Extra space document to include in the validation property.
        #[arg(long)]
        inject: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ValidateOutput {
    #[serde(rename = "type")]
    doc_type: &'static str,
    valid: bool,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct FlatOutput {
    p1: bool,
    omega: bool,
    adjoint: bool,
    witnesses: Vec<String>,
}

#[derive(Serialize)]
struct DistanceOutput {
    value: String,
}

#[derive(Serialize)]
struct RepOutput {
    representative: Option<String>,
}

#[derive(Serialize)]
struct DcpoOutput {
    holds: bool,
    monotone_maps: usize,
    preserving_maps: usize,
    issues: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn read_doc<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn doc_dir(path: &Path) -> Option<PathBuf> {
    path.parent().map(|p| p.to_path_buf())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(&file)?;
            let dir = doc_dir(&file);
            let (doc_type, violations) = match doc::parse_document(&text)? {
                Document::Space(doc) => {
                    let space = space_from_doc(&doc)?;
                    let report = space.validate();
                    (
                        "space",
                        report.violations.iter().map(|v| v.to_string()).collect(),
                    )
                }
                Document::Module(doc) => {
                    let report = doc::validate_module_doc(&doc, dir.as_deref())?;
                    (
                        "module",
                        report
                            .violations
                            .iter()
                            .map(|v| {
                                format!(
                                    "module inequality fails at ({}, {}): bound = {}, value = {}",
                                    v.x, v.y, v.bound, v.value
                                )
                            })
                            .collect(),
                    )
                }
                Document::Filter(doc) => {
                    filter_from_doc(&doc, dir.as_deref())?;
                    ("filter", Vec::new())
                }
                Document::Sequence(doc) => {
                    sequence_from_doc(&doc, dir.as_deref())?;
                    ("sequence", Vec::new())
                }
                Document::Functor(doc) => {
                    let functor = functor_from_doc(&doc, dir.as_deref())?;
                    let report = functor.validate();
                    (
                        "functor",
                        report.violations.iter().map(|v| v.to_string()).collect(),
                    )
                }
            };
            let valid = violations.is_empty();
            let output = ValidateOutput {
                doc_type,
                valid,
                violations,
            };
            print!("{}", to_json_pretty(&output));
            Ok(if valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Flat {
            file,
            family_cap,
            max_instances,
            out,
        } => {
            let module_doc: doc::ModuleDoc = read_doc(&file)?;
            let module = match module_from_doc(&module_doc, doc_dir(&file).as_deref())? {
                AnyModule::Left(m) => m,
                AnyModule::Right(_) => {
                    return Err(Error::Document(
                        "flatness is classified for left modules".into(),
                    ))
                }
            };
            let p1 = is_p1_flat(&module);
            let omega = is_aleph_flat(&module, Aleph::OMEGA);
            let adjoint = is_left_adjoint(&module);
            let mut witnesses = Vec::new();
            let cfg = LatticeCheckConfig {
                family_cap,
                max_instances,
                grid: None,
            };
            for (holds, class) in [
                (p1, FlatnessClass::P1),
                (omega, FlatnessClass::Aleph(Aleph::OMEGA)),
                (adjoint, FlatnessClass::Adjoint),
            ] {
                if holds {
                    continue;
                }
                match class {
                    FlatnessClass::Adjoint => {
                        let candidate = right_adjoint_candidate(&module);
                        let composite = compose(&candidate, &module).expect("same space");
                        witnesses.push(format!(
                            "adjoint: candidate right adjoint {:?} gives composite {composite}",
                            candidate.values()
                        ));
                    }
                    _ => {
                        for violation in
                            sampled_lattice_check(&module, &class, &cfg).violations
                        {
                            witnesses.push(format!("{class}: {violation}"));
                        }
                    }
                }
            }
            let output = FlatOutput {
                p1,
                omega,
                adjoint,
                witnesses,
            };
            emit(&out, &to_json_pretty(&output))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Complete {
            file,
            kind,
            dot,
            out,
        } => {
            let space = space_from_doc(&read_doc(&file)?)?;
            let kind: CompletionKind = kind.parse().map_err(Error::Document)?;
            let completion = complete(&space, &kind)?;
            if let Some(dot_path) = dot {
                std::fs::write(dot_path, specialization_dot(completion.space()))?;
            }
            emit(&out, &to_json_pretty(&completion_to_doc(&completion)))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Distance {
            file,
            from,
            to,
            out,
        } => {
            let space = space_from_doc(&read_doc(&file)?)?;
            let parse_subset = |csv: &str| -> Result<Vec<usize>, Error> {
                csv.split(',')
                    .map(|name| {
                        let name = name.trim();
                        space
                            .index_of(name)
                            .ok_or_else(|| Error::UnknownObject(name.to_string()))
                    })
                    .collect()
            };
            let s = parse_subset(&from)?;
            let t = parse_subset(&to)?;
            let value = semi_hausdorff(&space, &s, &t)?;
            emit(
                &out,
                &to_json_pretty(&DistanceOutput {
                    value: value.to_string(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Kan { file, functor, out } => {
            let module_doc: doc::ModuleDoc = read_doc(&file)?;
            let module = match module_from_doc(&module_doc, doc_dir(&file).as_deref())? {
                AnyModule::Left(m) => m,
                AnyModule::Right(_) => {
                    return Err(Error::Document(
                        "Kan extension expects a left module".into(),
                    ))
                }
            };
            let functor_doc: doc::FunctorDoc = read_doc(&functor)?;
            let g = functor_from_doc(&functor_doc, doc_dir(&functor).as_deref())?;
            let lan = left_kan_extension(&module, &g)?;
            emit(&out, &to_json_pretty(&module_to_doc(&AnyModule::Left(lan))))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Rep { file, out } => {
            let filter_doc: doc::FilterDoc = read_doc(&file)?;
            let filter = filter_from_doc(&filter_doc, doc_dir(&file).as_deref())?;
            let representative = filter
                .representative()
                .map(|x| filter.space().name(x).to_string());
            emit(&out, &to_json_pretty(&RepOutput { representative }))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::IdealComplete {
            file,
            aleph,
            dot,
            out,
        } => {
            let space = space_from_doc(&read_doc(&file)?)?;
            let aleph: Aleph = aleph.parse().map_err(Error::Document)?;
            let completion = ideal_completion(&space, aleph)?;
            if let Some(dot_path) = dot {
                std::fs::write(dot_path, hasse_dot(completion.space())?)?;
            }
            emit(&out, &to_json_pretty(&completion_to_doc(&completion)))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Reflect { file, out } => {
            let space = space_from_doc(&read_doc(&file)?)?;
            let reflection = poset_reflection(&space)?;
            emit(&out, &to_json_pretty(&completion_to_doc(&reflection)))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::CheckDcpo {
            a,
            b,
            max_objects,
            out,
        } => {
            let a = space_from_doc(&read_doc(&a)?)?;
            let b = space_from_doc(&read_doc(&b)?)?;
            let limits = UniversalPropertyLimits {
                max_source: max_objects,
                max_target: max_objects,
            };
            let report = check_dcpo_universal_property(&a, &b, &limits)?;
            let holds = report.holds();
            emit(
                &out,
                &to_json_pretty(&DcpoOutput {
                    holds,
                    monotone_maps: report.monotone_maps,
                    preserving_maps: report.preserving_maps,
                    issues: report.issues,
                }),
            )?;
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Check {
            seed,
            max_objects,
            grid,
            spaces,
            inject,
            out,
        } => {
            let grid_values: Vec<CostValue> = match grid {
                None => RunConfig::default().grid,
                Some(csv) => csv
                    .split(',')
                    .map(|s| s.trim().parse::<CostValue>())
                    .collect::<Result<_, _>>()?,
            };
            let inject_doc = match inject {
                None => None,
                Some(path) => Some(read_doc::<doc::SpaceDoc>(&path)?),
            };
            let cfg = RunConfig {
                seed,
                max_objects,
                grid: grid_values,
                space_count: spaces,
                inject: inject_doc,
            };
            let report = run_suite(&cfg)?;
            emit(&out, &to_json_pretty(&report))?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}
