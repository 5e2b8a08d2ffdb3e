//! Grid mode: run independent jobs and merge their reports in input order.
//! Jobs share nothing (each builds its own field registry), so the parallel
//! path is a plain data-parallel map; the sequential path is always
//! available for comparison and as the fallback without the `parallel`
//! feature.

use crate::error::Error;
use crate::job::{run, JobSpec};
use crate::report::Report;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Outcome of one grid entry; errors are carried in place so the merged
/// output keeps input order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GridEntry {
    Ok { report: Report },
    Error { message: String },
}

impl GridEntry {
    pub fn pass(&self) -> bool {
        match self {
            GridEntry::Ok { report } => report.overall_pass,
            GridEntry::Error { .. } => false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GridReport {
    pub schema: u32,
    pub entries: Vec<GridEntry>,
    pub overall_pass: bool,
}

fn entry_for(job: &JobSpec) -> GridEntry {
    match run(job) {
        Ok(report) => GridEntry::Ok { report },
        Err(e) => GridEntry::Error {
            message: e.to_string(),
        },
    }
}

fn merge(entries: Vec<GridEntry>) -> GridReport {
    let overall_pass = entries.iter().all(|e| e.pass());
    GridReport {
        schema: crate::report::SCHEMA_VERSION,
        entries,
        overall_pass,
    }
}

/// Sequential evaluation, always available.
pub fn run_jobs_seq(jobs: &[JobSpec]) -> GridReport {
    merge(jobs.iter().map(entry_for).collect())
}

/// Data-parallel evaluation over the job list; order of the merged entries
/// matches the input. Falls back to the sequential path when the `parallel`
/// feature is disabled.
#[cfg(feature = "parallel")]
pub fn run_jobs(jobs: &[JobSpec]) -> GridReport {
    merge(jobs.par_iter().map(entry_for).collect())
}

#[cfg(not(feature = "parallel"))]
pub fn run_jobs(jobs: &[JobSpec]) -> GridReport {
    run_jobs_seq(jobs)
}

/// Worst error class across entries, for the exit code: parse/input issues
/// dominate certificate failures.
pub fn grid_error_hint(report: &GridReport) -> Option<Error> {
    for e in &report.entries {
        if let GridEntry::Error { message } = e {
            return Some(Error::Certificate(message.clone()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::{parse_job, Command};

    fn jobs() -> Vec<JobSpec> {
        let texts = [
            "prime = 2\ne = 1\nN = 2\nr = 1\nparams = a0 a1 a2\ncoeff[1] = a0 a1 a2\n",
            "prime = 3\ne = 1\nN = 2\nr = 1\nparams = a0 a1 a2\ncoeff[1] = a0 a1 a2\n",
            "prime = 2\ne = 1\nN = 3\nr = 2\nparams = s0 s1 s2 s3 t0 t1 t2 t3\n\
             coeff[1] = s0 s1 s2 s3\ncoeff[2] = t0 t1 t2 t3\n",
        ];
        texts
            .iter()
            .map(|t| {
                let mut j = parse_job(t).unwrap();
                j.commands = vec![Command::Invariants];
                j
            })
            .collect()
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let jobs = jobs();
        let seq = run_jobs_seq(&jobs);
        let par = run_jobs(&jobs);
        assert_eq!(seq, par);
        assert!(seq.overall_pass);
        assert_eq!(seq.entries.len(), 3);
    }
}
