//! Output files: a commented metadata header (tool version, resolved
//! configuration, wall time, model parameters in effect), then a `# data:`
//! marker and the data section. Re-running a command with the same
//! configuration reproduces the data section byte for byte; only the header
//! timing lines vary.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};

pub struct Report {
    header: String,
    data: String,
}

impl Report {
    pub fn new(
        command: &str,
        config_lines: &[String],
        design: &[(&str, String)],
        warnings: &[String],
        started: Instant,
    ) -> Self {
        let mut h = String::new();
        h.push_str(&format!(
            "# lgtrap v{} — {command}\n",
            env!("CARGO_PKG_VERSION")
        ));
        h.push_str(&format!(
            "# wall_time_s: {:.3}\n",
            started.elapsed().as_secs_f64()
        ));
        h.push_str("# config:\n");
        for line in config_lines {
            h.push_str(&format!("#   {line}\n"));
        }
        h.push_str("# model parameters:\n");
        for (k, v) in design {
            h.push_str(&format!("#   {k} = {v}\n"));
        }
        for w in warnings {
            h.push_str(&format!("# warning: {w}\n"));
        }
        Report {
            header: h,
            data: String::new(),
        }
    }

    pub fn push_line(&mut self, line: &str) {
        self.data.push_str(line);
        self.data.push('\n');
    }

    pub fn push_str(&mut self, s: &str) {
        self.data.push_str(s);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let mut out = self.header.clone();
        out.push_str("# data:\n");
        out.push_str(&self.data);
        std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// Model-parameter lines shared by every command.
pub fn common_design() -> Vec<(&'static str, String)> {
    vec![
        ("internal_units", "SI".into()),
        (
            "tightness_ratio",
            format!("{}", lgtrap::trap::TIGHTNESS),
        ),
        (
            "same_power_both_beams",
            "true (reported power applies to each beam)".into(),
        ),
        (
            "light_sheet_waist",
            "circular-beam inversion (approximation)".into(),
        ),
    ]
}

/// Run `jobs` indexed closures on up to `threads` workers; results come back
/// in index order, so the fan-out never affects output bytes.
pub fn run_indexed<T: Send>(
    threads: usize,
    jobs: Vec<Box<dyn FnOnce() -> T + Send + '_>>,
) -> Vec<T> {
    if threads <= 1 || jobs.len() <= 1 {
        return jobs.into_iter().map(|j| j()).collect();
    }
    let n = jobs.len();
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let queue = std::sync::Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>());
    let slots_ref = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(n) {
            scope.spawn(|| loop {
                let job = { queue.lock().unwrap().pop() };
                match job {
                    None => break,
                    Some((idx, f)) => {
                        let value = f();
                        slots_ref.lock().unwrap()[idx] = Some(value);
                    }
                }
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}
