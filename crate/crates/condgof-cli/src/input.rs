//! Dataset ingestion: raw whitespace-separated integers, or CSV rows of
//! `value,count` with an optional header.

use std::fmt;
use std::path::Path;

use condgof::Sample;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn read_dataset(path: &Path) -> Result<Sample, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(parse_dataset(&text)?)
}

/// Any comma in the body selects the frequency-table format.
pub fn parse_dataset(text: &str) -> Result<Sample, ParseError> {
    if text.contains(',') {
        parse_frequency_csv(text)
    } else {
        parse_raw(text)
    }
}

fn parse_raw(text: &str) -> Result<Sample, ParseError> {
    let mut values = Vec::new();
    for (index, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let value: u64 = token.parse().map_err(|_| ParseError {
                line: index + 1,
                message: format!("expected a non-negative integer, got '{token}'"),
            })?;
            values.push(value);
        }
    }
    Sample::new(values).map_err(|_| ParseError {
        line: 1,
        message: "dataset is empty".into(),
    })
}

fn parse_frequency_csv(text: &str) -> Result<Sample, ParseError> {
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split(',').map(str::trim);
        let (value, count) = match (fields.next(), fields.next(), fields.next()) {
            (Some(v), Some(c), None) => (v, c),
            _ => {
                return Err(ParseError {
                    line: line_no,
                    message: format!("expected 'value,count', got '{trimmed}'"),
                })
            }
        };
        match (value.parse::<u64>(), count.parse::<u64>()) {
            (Ok(v), Ok(c)) => rows.push((v, c)),
            _ if index == 0 => continue, // header row
            _ => {
                return Err(ParseError {
                    line: line_no,
                    message: format!("expected 'value,count' integers, got '{trimmed}'"),
                })
            }
        }
    }
    Sample::from_counts(&rows).map_err(|_| ParseError {
        line: 1,
        message: "dataset has no positive counts".into(),
    })
}
