use std::process::ExitCode;

use bredon_cli::{diagnostics, exit_code, load, report, schema};
use bredon_core::groups::DEFAULT_ORDER_CAP;
use bredon_core::pipeline::{CheckLevel, Systems};
use bredon_core::{presets, Error};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bredon", version, about = "Equivariant cohomology and K-theory of sliced torus actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemsArg {
    Blowup,
    XSide,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a scenario file or preset.
    Compute {
        #[arg(long, conflicts_with = "preset")]
        scenario: Option<String>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, value_enum)]
        systems: Option<SystemsArg>,
        #[arg(long = "check-invariants", value_enum)]
        check: Option<CheckArg>,
        #[arg(long)]
        max_group_order: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        report: Format,
    },
    /// List built-in scenarios and crossed-product examples.
    ListPresets {
        #[arg(long, value_enum, default_value = "table")]
        report: Format,
    },
    /// Print a preset as a scenario file.
    ShowPreset { name: String },
    /// Structure checks on a finite twisted crossed product.
    Crossed {
        #[arg(long)]
        preset: String,
        #[arg(long, value_enum, default_value = "table")]
        report: Format,
    },
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute { scenario, preset, systems, check, max_group_order, report: fmt } => {
            let (s, mut o) = match load(scenario.as_deref(), preset.as_deref()) {
                Ok(x) => x,
                Err(e) => return fail(&e),
            };
            if let Some(v) = systems {
                o.systems = match v {
                    SystemsArg::Blowup => Systems::Blowup,
                    SystemsArg::XSide => Systems::XSide,
                    SystemsArg::Both => Systems::Both,
                };
            }
            if let Some(c) = check {
                o.check = match c {
                    CheckArg::Fast => CheckLevel::Fast,
                    CheckArg::Full => CheckLevel::Full,
                };
            }
            if let Some(m) = max_group_order {
                o.max_group_order = m;
            }
            match bredon_cli::compute(&s, &o) {
                Ok(r) => {
                    match fmt {
                        Format::Table => emit(&report::table(&r)),
                        Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&report::json(&r)).unwrap())),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::ListPresets { report: fmt } => {
            let scen: Vec<(String, String)> =
                presets::all().into_iter().map(|s| (s.name, s.description)).collect();
            let crossed: Vec<(String, String)> = presets::crossed_names()
                .into_iter()
                .map(|n| {
                    let d = presets::crossed_preset(&n).unwrap().description;
                    (n, d)
                })
                .collect();
            match fmt {
                Format::Table => {
                    let w = scen.iter().chain(&crossed).map(|(n, _)| n.len()).max().unwrap_or(0);
                    let mut t = String::from("scenarios\n");
                    for (n, d) in &scen {
                        t.push_str(&format!("  {n:w$}  {d}\n"));
                    }
                    t.push_str("crossed-product examples\n");
                    for (n, d) in &crossed {
                        t.push_str(&format!("  {n:w$}  {d}\n"));
                    }
                    emit(&t);
                }
                Format::Json => {
                    let entry = |(n, d): &(String, String)| serde_json::json!({ "name": n, "description": d });
                    let v = serde_json::json!({
                        "scenarios": scen.iter().map(entry).collect::<Vec<_>>(),
                        "crossed": crossed.iter().map(entry).collect::<Vec<_>>(),
                    });
                    emit(&format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
                }
            }
            ExitCode::SUCCESS
        }
        Command::ShowPreset { name } => match presets::preset(&name) {
            Some(s) => {
                emit(&format!("{}\n", schema::to_json(&s)));
                ExitCode::SUCCESS
            }
            None => fail(&Error::Invalid(format!("unknown preset {name:?}"))),
        },
        Command::Crossed { preset, report: fmt } => {
            let Some(ex) = presets::crossed_preset(&preset) else {
                return fail(&Error::Invalid(format!("unknown crossed-product example {preset:?}")));
            };
            match diagnostics::diagnose(&ex, DEFAULT_ORDER_CAP) {
                Ok(d) => {
                    match fmt {
                        Format::Table => emit(&report::crossed_table(&d)),
                        Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&report::crossed_json(&d)).unwrap())),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
