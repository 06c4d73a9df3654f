//! File formats, reports and orchestration behind the `bredon` command.

pub mod diagnostics;
pub mod report;
pub mod schema;

use bredon_core::pipeline::{run, Options, Report};
use bredon_core::scenario::Scenario;
use bredon_core::{presets, Error};

/// Process exit status for each failure class.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) => 2,
        Error::GroupClosure(_) | Error::GroupTooLarge { .. } => 3,
        Error::NotCellular(_) => 4,
        Error::Invariant(_) => 5,
        Error::Dimension(_) => 6,
    }
}

/// Where a scenario comes from, with any options stored in its file.
pub fn load(path: Option<&str>, preset: Option<&str>) -> Result<(Scenario, Options), Error> {
    match (path, preset) {
        (Some(p), None) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("cannot read {p}: {e}")))?;
            let f = schema::parse_scenario(&text).map_err(|e| Error::Invalid(format!("{p}: {e}")))?;
            Ok((f.to_scenario(), f.options()))
        }
        (None, Some(n)) => presets::preset(n)
            .map(|s| (s, Options::default()))
            .ok_or_else(|| Error::Invalid(format!("unknown preset {n:?}; see list-presets"))),
        _ => Err(Error::Invalid("give exactly one of --scenario and --preset".into())),
    }
}

pub fn compute(s: &Scenario, o: &Options) -> Result<Report, Error> {
    run(s, o)
}
