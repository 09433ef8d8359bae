//! Process-level plumbing: the external paraphrase command and the thread pool runner.

use std::io::Write;
use std::process::{Command, Stdio};

use cocoa_core::query::{Paraphraser, QueryError, QueryUnit, UnitOutput};
use rayon::prelude::*;

/// Runs `sh -c <command>` with the requirement on stdin and takes stdout
/// as the paraphrase. Failures keep the template text.
#[derive(Debug, Clone)]
pub struct CommandParaphraser {
    command: String,
}

impl CommandParaphraser {
    pub fn new(command: impl Into<String>) -> Self {
        CommandParaphraser {
            command: command.into(),
        }
    }

    fn run(&self, text: &str) -> std::io::Result<Option<String>> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        child
            .stdin
            .take()
            .expect("stdin is piped")
            .write_all(text.as_bytes())?;
        let output = child.wait_with_output()?;
        if !output.status.success() {
            log::warn!("paraphrase command exited with {}", output.status);
            return Ok(None);
        }
        Ok(String::from_utf8(output.stdout)
            .ok()
            .map(|s| s.trim().to_string()))
    }
}

impl Paraphraser for CommandParaphraser {
    fn paraphrase(&self, text: &str) -> Option<String> {
        self.run(text).unwrap_or_else(|e| {
            log::warn!("paraphrase command failed: {e}");
            None
        })
    }
}

/// Runs units on a pool of `jobs` threads (0 = rayon default), preserving order.
pub fn run_parallel(
    jobs: usize,
    units: &[QueryUnit],
    work: &(dyn Fn(&QueryUnit) -> Result<UnitOutput, QueryError> + Sync),
) -> Vec<Result<UnitOutput, QueryError>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool starts");
    pool.install(|| units.par_iter().map(work).collect())
}
