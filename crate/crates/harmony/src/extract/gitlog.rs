//! Parser for the pinned `git log` invocation.
//!
//! The log is requested as `--raw` output with the pretty format
//! `%x01%H%x1f%P%x1f%an%x1f%ae%x1f%at%x1f%s`: every commit header line starts
//! with byte 0x01 and carries six 0x1f-separated fields; each change line
//! matches the raw-diff shape `:(mode) (mode) (hash) (hash) (status)\t(path)`.
//! Blank lines separate entries and are ignored. Anything else is a parse
//! error, reported with the offending line and its byte offset.

use std::sync::LazyLock;

use regex::Regex;

use super::ExtractError;

/// Arguments of the pinned history invocation, after `-C <location>`.
pub const GIT_LOG_ARGS: [&str; 7] = [
    "log",
    "--all",
    "--topo-order",
    "--no-renames",
    "--raw",
    "--date=unix",
    "--pretty=format:%x01%H%x1f%P%x1f%an%x1f%ae%x1f%at%x1f%s",
];

static HASH_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[0-9a-f]{40}$").unwrap());
static RAW_CHANGE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^:(\d{6}) (\d{6}) ([0-9a-f.]+) ([0-9a-f.]+) ([AMDT])\t(.*)$").unwrap()
});

/// One parsed commit, before mapping into the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCommitRecord {
    pub hash: String,
    pub parent_hashes: Vec<String>,
    pub author_name: String,
    pub author_email: String,
    pub author_timestamp: i64,
    pub subject: String,
    /// (status letter, path) pairs; status is one of A, M, D, T.
    pub raw_changes: Vec<(char, String)>,
}

fn parse_error(message: impl Into<String>, line: &str, offset: u64) -> ExtractError {
    ExtractError::Parse {
        message: message.into(),
        line: line.to_string(),
        offset,
    }
}

/// Parses the byte output of the pinned `git log` command.
pub fn parse_git_log(output: &[u8]) -> Result<Vec<RawCommitRecord>, ExtractError> {
    let mut records: Vec<RawCommitRecord> = Vec::new();
    let mut offset: u64 = 0;

    for raw_line in output.split(|&b| b == b'\n') {
        let line_offset = offset;
        offset += raw_line.len() as u64 + 1;

        if raw_line.is_empty() {
            continue;
        }
        let line = std::str::from_utf8(raw_line).map_err(|_| {
            parse_error(
                "line is not valid UTF-8",
                &String::from_utf8_lossy(raw_line),
                line_offset,
            )
        })?;

        if let Some(header) = line.strip_prefix('\u{01}') {
            records.push(parse_header(header, line, line_offset)?);
        } else if line.starts_with(':') {
            let record = records.last_mut().ok_or_else(|| {
                parse_error("change line before any commit header", line, line_offset)
            })?;
            let captures = RAW_CHANGE_RE.captures(line).ok_or_else(|| {
                parse_error("malformed raw change line", line, line_offset)
            })?;
            let status = captures[5].chars().next().expect("single status letter");
            record.raw_changes.push((status, captures[6].to_string()));
        } else {
            return Err(parse_error("unexpected log line", line, line_offset));
        }
    }

    Ok(records)
}

fn parse_header(header: &str, line: &str, offset: u64) -> Result<RawCommitRecord, ExtractError> {
    let fields: Vec<&str> = header.splitn(6, '\u{1f}').collect();
    if fields.len() != 6 {
        return Err(parse_error(
            format!("expected 6 header fields, found {}", fields.len()),
            line,
            offset,
        ));
    }
    let hash = fields[0];
    if !HASH_RE.is_match(hash) {
        return Err(parse_error(
            format!("malformed commit hash {hash:?}"),
            line,
            offset,
        ));
    }
    let mut parent_hashes = Vec::new();
    for parent in fields[1].split(' ').filter(|p| !p.is_empty()) {
        if !HASH_RE.is_match(parent) {
            return Err(parse_error(
                format!("malformed parent hash {parent:?}"),
                line,
                offset,
            ));
        }
        parent_hashes.push(parent.to_string());
    }
    let author_timestamp: i64 = fields[4]
        .parse()
        .map_err(|_| parse_error(format!("malformed timestamp {:?}", fields[4]), line, offset))?;

    Ok(RawCommitRecord {
        hash: hash.to_string(),
        parent_hashes,
        author_name: fields[2].to_string(),
        author_email: fields[3].to_string(),
        author_timestamp,
        subject: fields[5].to_string(),
        raw_changes: Vec::new(),
    })
}
