//! Run artifacts: front table, region event log and manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use apdi_core::{Event, Objectives, Region};
use serde::{Deserialize, Serialize};

use crate::config::Manifest;

pub const FRONT_FILE: &str = "front.tsv";
pub const EVENTS_FILE: &str = "events.json";
pub const MANIFEST_FILE: &str = "manifest.toml";

const FRONT_HEADER: &str = "# apdi-front v1";
const EVENTS_FORMAT: &str = "apdi-events";
const EVENTS_VERSION: u32 = 1;

/// One final-front member: objective values and a genome rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRow {
    pub objectives: Objectives,
    pub genome: String,
}

/// Front rows sorted lexicographically by objectives.
pub fn render_front(rows: &[FrontRow]) -> String {
    let m = rows.first().map_or(0, |r| r.objectives.len());
    let mut sorted: Vec<&FrontRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.objectives
            .iter()
            .zip(b.objectives.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = String::new();
    writeln!(out, "{FRONT_HEADER}").unwrap();
    let columns: Vec<String> = (1..=m).map(|i| format!("f{i}")).collect();
    writeln!(out, "{}\tgenome", columns.join("\t")).unwrap();
    for row in sorted {
        let values: Vec<String> = row.objectives.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}\t{}", values.join("\t"), row.genome).unwrap();
    }
    out
}

pub fn parse_front(text: &str) -> Result<Vec<Objectives>> {
    let mut lines = text.lines();
    if lines.next() != Some(FRONT_HEADER) {
        bail!("missing `{FRONT_HEADER}` header");
    }
    let columns = lines.next().context("missing column header")?;
    let m = columns.split('\t').filter(|c| c.starts_with('f')).count();
    let mut front = Vec::new();
    for (n, line) in lines.enumerate() {
        let values = line
            .split('\t')
            .take(m)
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<f64>, _>>()
            .with_context(|| format!("bad number on data row {}", n + 1))?;
        if values.len() != m {
            bail!("data row {} has {} objectives, expected {m}", n + 1, values.len());
        }
        front.push(Objectives::new(values).with_context(|| format!("data row {}", n + 1))?);
    }
    Ok(front)
}

#[derive(Debug, Serialize, Deserialize)]
struct EventLog {
    format: String,
    version: u32,
    events: Vec<Event>,
}

pub fn render_events(events: &[Event]) -> Result<String> {
    let log = EventLog { format: EVENTS_FORMAT.into(), version: EVENTS_VERSION, events: events.to_vec() };
    let mut text = serde_json::to_string_pretty(&log)?;
    text.push('\n');
    Ok(text)
}

pub fn parse_events(text: &str) -> Result<Vec<Event>> {
    let log: EventLog = serde_json::from_str(text).context("malformed event log")?;
    if log.format != EVENTS_FORMAT || log.version != EVENTS_VERSION {
        bail!("unsupported event log `{}` version {}", log.format, log.version);
    }
    Ok(log.events)
}

pub fn write_run(dir: &Path, manifest: &Manifest, front: &[FrontRow], events: &[Event]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
    };
    write(FRONT_FILE, render_front(front))?;
    write(EVENTS_FILE, render_events(events)?)?;
    write(MANIFEST_FILE, manifest.render()?)?;
    Ok(())
}

/// A run read back from disk.
#[derive(Debug, Clone)]
pub struct LoadedRun {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub front: Vec<Objectives>,
    pub events: Vec<Event>,
}

impl LoadedRun {
    /// Region of the last build, if any.
    pub fn final_region(&self) -> Option<Region> {
        self.events.last().map(|e| e.region())
    }
}

pub fn load_run(dir: &Path) -> Result<LoadedRun> {
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))
    };
    let manifest = Manifest::parse(&read(MANIFEST_FILE)?).with_context(|| format!("in {}", dir.display()))?;
    let front = parse_front(&read(FRONT_FILE)?).with_context(|| format!("in {}", dir.display()))?;
    let events = parse_events(&read(EVENTS_FILE)?).with_context(|| format!("in {}", dir.display()))?;
    Ok(LoadedRun { dir: dir.to_path_buf(), manifest, front, events })
}

/// `dir` itself when it holds a manifest, otherwise its run subdirectories in name order.
pub fn discover_runs(dir: &Path) -> Result<Vec<PathBuf>> {
    if dir.join(MANIFEST_FILE).is_file() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let mut runs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(MANIFEST_FILE).is_file())
        .collect();
    runs.sort();
    if runs.is_empty() {
        bail!("no runs found under {}", dir.display());
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(values: &[f64], genome: &str) -> FrontRow {
        FrontRow { objectives: Objectives::new(values.to_vec()).unwrap(), genome: genome.into() }
    }

    #[test]
    fn front_round_trip_and_ordering() {
        let rows = vec![row(&[0.5, 0.1], "b"), row(&[0.1, 0.9], "a"), row(&[0.30000000000000004, 0.2], "c")];
        let text = render_front(&rows);
        assert_eq!(
            text,
            "# apdi-front v1\nf1\tf2\tgenome\n0.1\t0.9\ta\n0.30000000000000004\t0.2\tc\n0.5\t0.1\tb\n"
        );
        let back = parse_front(&text).unwrap();
        assert_eq!(back[1].as_slice(), &[0.30000000000000004, 0.2]);
    }

    #[test]
    fn front_rejects_bad_input() {
        assert!(parse_front("f1\tf2\n").is_err());
        assert!(parse_front("# apdi-front v1\nf1\tf2\tgenome\n0.1\tx\t\n").is_err());
    }
}
