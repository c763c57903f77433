use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use super::{AmceEstimate, ConjointError, ConjointResponse, ResponseSet};

const RESPONDENT: &str = "respondent_id";
const TASK: &str = "task_index";
const OUTCOME: &str = "outcome";

/// Reads `respondent_id,task_index,<attributes…>,outcome` CSV.
pub fn read_responses(reader: impl Read) -> Result<ResponseSet, ConjointError> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let malformed = |line: u64, reason: String| ConjointError::Malformed { line, reason };

    let header: Vec<String> = csv
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.len() < 4 || header[0] != RESPONDENT || header[1] != TASK || header[header.len() - 1] != OUTCOME {
        return Err(malformed(
            1,
            format!("header must be {RESPONDENT},{TASK},<attribute columns…>,{OUTCOME}"),
        ));
    }
    let attributes: Vec<String> = header[2..header.len() - 1].to_vec();
    for (i, a) in attributes.iter().enumerate() {
        if a.is_empty() || attributes[..i].contains(a) || [RESPONDENT, TASK, OUTCOME].contains(&a.as_str()) {
            return Err(malformed(1, format!("invalid or duplicate attribute column `{a}`")));
        }
    }

    let mut responses = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let respondent_id = record[0].to_string();
        if respondent_id.is_empty() {
            return Err(malformed(line, "empty respondent_id".into()));
        }
        let task_index: u32 = record[1]
            .parse()
            .map_err(|e| malformed(line, format!("bad task_index `{}`: {e}", &record[1])))?;
        let raw_outcome = &record[header.len() - 1];
        let outcome: f64 = raw_outcome
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| malformed(line, format!("outcome `{raw_outcome}` is not a finite number")))?;
        let mut levels = BTreeMap::new();
        for (i, attribute) in attributes.iter().enumerate() {
            let level = &record[i + 2];
            if level.is_empty() {
                return Err(malformed(line, format!("empty level for `{attribute}`")));
            }
            levels.insert(attribute.clone(), level.to_string());
        }
        responses.push(ConjointResponse {
            respondent_id,
            task_index,
            attributes: levels,
            outcome,
        });
    }
    Ok(ResponseSet { attributes, responses })
}

pub fn load_responses(path: impl AsRef<Path>) -> Result<ResponseSet, ConjointError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| ConjointError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_responses(std::io::BufReader::new(file))
}

fn io_error(e: csv::Error) -> ConjointError {
    ConjointError::Io {
        path: "<output>".into(),
        source: std::io::Error::other(e),
    }
}

pub fn write_responses(set: &ResponseSet, writer: impl Write) -> Result<(), ConjointError> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![RESPONDENT.to_string(), TASK.to_string()];
    header.extend(set.attributes.iter().cloned());
    header.push(OUTCOME.into());
    csv.write_record(&header).map_err(io_error)?;
    for r in &set.responses {
        let mut row = vec![r.respondent_id.clone(), r.task_index.to_string()];
        row.extend(set.attributes.iter().map(|a| r.attributes[a].clone()));
        row.push(r.outcome.to_string());
        csv.write_record(&row).map_err(io_error)?;
    }
    csv.flush().map_err(|source| ConjointError::Io {
        path: "<output>".into(),
        source,
    })
}

/// One CSV record per estimate: `attribute,level,estimate,se,z,p,is_baseline`.
/// Baseline rows leave `se`, `z` and `p` empty.
pub fn write_estimates(estimates: &[AmceEstimate], writer: impl Write) -> Result<(), ConjointError> {
    let mut csv = csv::Writer::from_writer(writer);
    for e in estimates {
        csv.serialize(e).map_err(io_error)?;
    }
    csv.flush().map_err(|source| ConjointError::Io {
        path: "<output>".into(),
        source,
    })
}
