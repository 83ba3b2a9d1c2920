use std::path::Path;

use nsmacro::boxes::{local_vertices, BoxJson};
use nsmacro::chsh::pr_on_facet;
use nsmacro::{class_generator, pr_box, uniform_box, ClassId, CorrelationBox, Table, EPS_PROB};

use crate::error::CliError;

/// A box from the command line, kept raw so `validate` can report on it.
pub enum Source {
    Builtin(CorrelationBox),
    File(Table),
}

impl Source {
    pub fn table(&self) -> &Table {
        match self {
            Source::Builtin(b) => b.table(),
            Source::File(t) => t,
        }
    }

    pub fn validated(&self) -> Result<CorrelationBox, CliError> {
        match self {
            Source::Builtin(b) => Ok(b.clone()),
            Source::File(t) => CorrelationBox::new(*t, EPS_PROB).map_err(CliError::from),
        }
    }
}

pub fn parse_source(spec: &str) -> Result<Source, CliError> {
    if let Some(b) = builtin(spec)? {
        return Ok(Source::Builtin(b));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
    let parsed: BoxJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(Source::File(parsed.p))
}

fn builtin(spec: &str) -> Result<Option<CorrelationBox>, CliError> {
    let lower = spec.to_ascii_lowercase();
    if lower == "pr" {
        return Ok(Some(pr_box()));
    }
    if lower == "uniform" {
        return Ok(Some(uniform_box()));
    }
    if let Some(f) = lower.strip_prefix("pr:") {
        return match f.parse::<usize>() {
            Ok(f) if f < 8 => Ok(Some(pr_on_facet(f))),
            _ => Err(CliError::Usage(format!("PR facet must be 0..=7, got '{f}'"))),
        };
    }
    if let Some(v) = local_vertices()
        .into_iter()
        .find(|v| v.name().eq_ignore_ascii_case(spec))
    {
        return Ok(Some(v.to_box()));
    }
    if let Some(rest) = spec.strip_prefix("class:") {
        return class_box(rest).map(Some);
    }
    Ok(None)
}

fn class_box(rest: &str) -> Result<CorrelationBox, CliError> {
    let (id, params) = rest.split_once(':').unwrap_or((rest, ""));
    let class = ClassId::parse(id)
        .ok_or_else(|| CliError::Usage(format!("unknown class '{id}', expected I..V")))?;
    let weights = params
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|item| {
            let v = item.split_once('=').map_or(item, |(_, v)| v);
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad class weight '{item}'")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if weights.is_empty() {
        return Err(CliError::Usage(format!("class {id} needs weights, e.g. class:{id}:p=0.5")));
    }
    Ok(class_generator(class, &weights, false)?.boxed)
}

/// `M` or `start:end:step`.
pub fn parse_m(spec: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad --M '{spec}', expected M or start:end:step"));
    let parts: Vec<&str> = spec.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<usize>, _>>()?;
    match nums[..] {
        [m] if m >= 1 => Ok(vec![m]),
        [start, end, step] if start >= 1 && start <= end && step >= 1 => {
            Ok(nsmacro::engine::m_range(start, end, step))
        }
        _ => Err(bad()),
    }
}
