//! Scheduling and report assembly.

use std::time::Instant;

use sigma_lab::{fault, AuditReport};

use crate::checks::{run_module, Context};
use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::report::{CheckRecord, Report};

/// Runs the selected modules on a pool of `config.jobs` threads. The
/// calling thread's fault, if any, is installed on every worker.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, CliError> {
    config.validate()?;
    let ctx = Context {
        kind: config.kind()?,
        sigma: config.sigma()?,
        max_order: config.max_order,
        samples: config.samples,
        seed: config.seed,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let installed = fault::current();
    let mut records = Vec::new();
    for module in config.selected() {
        let start = Instant::now();
        let audit = pool.install(|| {
            fault::with_fault(installed, || {
                std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run_module(module, &ctx))).unwrap_or_else(|payload| {
                    let message = payload
                        .downcast_ref::<&str>()
                        .map(|s| s.to_string())
                        .or_else(|| payload.downcast_ref::<String>().cloned())
                        .unwrap_or_default();
                    let mut r = AuditReport::new(module);
                    r.fail(format!("panic: {message}"), serde_json::json!({ "module": module, "config": config }));
                    r
                })
            })
        });
        records.push(CheckRecord::from_audit(module, audit, start.elapsed().as_secs_f64()));
    }
    let report = Report::new(records);
    if let Some(path) = &config.out {
        std::fs::write(path, report.to_json()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_selection_passes() {
        let cfg = SuiteConfig {
            modules: Some(vec![]),
            ..Default::default()
        };
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed());
        assert!(report.checks.is_empty());
    }
}
