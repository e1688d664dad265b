use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{improvement_of, BenchError, ConfigLabel, ImprovementCell, RunResult};

/// Compare strings treating runs of ASCII digits as numbers, so `i2`
/// sorts before `i10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a.chars().next(), b.chars().next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let na = a.find(|c: char| !c.is_ascii_digit()).unwrap_or(a.len());
                let nb = b.find(|c: char| !c.is_ascii_digit()).unwrap_or(b.len());
                let (da, db) = (a[..na].trim_start_matches('0'), b[..nb].trim_start_matches('0'));
                let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db)).then_with(|| na.cmp(&nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[na..];
                b = &b[nb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                a = &a[x.len_utf8()..];
                b = &b[y.len_utf8()..];
            }
        }
    }
}

/// `key=value` pairs carried in the CSV header comments.
pub type Metadata = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub table: String,
    pub rows: usize,
    /// (configuration, improved, deteriorated) for every non-plain column.
    pub summary: Vec<(ConfigLabel, usize, usize)>,
    pub warnings: Vec<String>,
}

fn value_text(v: Option<i64>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// Table of optimisation values per instance and configuration with the
/// change relative to `plain` in parentheses. Instances without any value
/// are left out; instances without a plain run are skipped with a warning.
/// `metadata` goes into `# key=value` lines at the top of the CSV.
pub fn report(records: &[RunResult], metadata: &[(String, String)]) -> Report {
    let mut columns: Vec<ConfigLabel> = ConfigLabel::STANDARD.to_vec();
    for r in records {
        if !columns.contains(&r.label) {
            columns.push(r.label.clone());
        }
    }
    let mut by_instance: BTreeMap<&str, BTreeMap<&ConfigLabel, Option<i64>>> = BTreeMap::new();
    for r in records {
        by_instance.entry(&r.instance).or_default().insert(&r.label, r.value);
    }
    let mut instances: Vec<&str> = by_instance.keys().copied().collect();
    instances.sort_by(|a, b| natural_cmp(a, b));

    let mut warnings = Vec::new();
    let mut counts = vec![(0usize, 0usize); columns.len()];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for inst in instances {
        let cells = &by_instance[inst];
        if cells.values().all(Option::is_none) {
            continue;
        }
        let Some(&plain) = cells.get(&ConfigLabel::Plain) else {
            let w = format!("instance `{inst}` has no plain run; row skipped");
            log::warn!("{w}");
            warnings.push(w);
            continue;
        };
        let mut row = vec![inst.to_string(), value_text(plain)];
        for (k, label) in columns.iter().enumerate().skip(1) {
            let Some(&v) = cells.get(label) else {
                row.push(String::new());
                continue;
            };
            let cell = improvement_of(plain, v);
            if cell.is_improvement() {
                counts[k].0 += 1;
            }
            if cell.is_deterioration() {
                counts[k].1 += 1;
            }
            row.push(match cell {
                ImprovementCell::BothUnsolved => value_text(v),
                c => format!("{} ({c})", value_text(v)),
            });
        }
        rows.push(row);
    }

    let header: Vec<String> = std::iter::once("Instance".to_string())
        .chain(columns.iter().map(|c| c.to_string()))
        .collect();

    let mut csv = String::new();
    for (k, v) in metadata {
        csv.push_str(&format!("# {k}={v}\n"));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in std::iter::once(&header).chain(&rows) {
        w.write_record(r).expect("writing to memory");
    }
    csv.push_str(&String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 fields"));

    let summary: Vec<(ConfigLabel, usize, usize)> = columns
        .iter()
        .zip(&counts)
        .skip(1)
        .map(|(c, &(i, d))| (c.clone(), i, d))
        .collect();

    let widths: Vec<usize> = (0..header.len())
        .map(|k| std::iter::once(&header).chain(&rows).map(|r| r[k].chars().count()).max().unwrap_or(0))
        .collect();
    let line = |r: &[String]| {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(k, (c, &w))| if k == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut table = String::new();
    table.push_str(&line(&header));
    table.push('\n');
    table.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
    table.push('\n');
    for r in &rows {
        table.push_str(&line(r));
        table.push('\n');
    }
    table.push('\n');
    for (c, i, d) in &summary {
        table.push_str(&format!("{c}: improved: {i}, deteriorated: {d}\n"));
    }

    Report {
        csv,
        table,
        rows: rows.len(),
        summary,
        warnings,
    }
}

/// Records and metadata back from a CSV written by [`report`]. Empty
/// cells stand for configurations that were not run.
pub fn parse_results_csv(text: &str) -> Result<(Vec<RunResult>, Metadata), BenchError> {
    let mut metadata = Vec::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') {
            metadata.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let bad = |e: csv::Error| BenchError::Results(e.to_string());
    let header = reader.headers().map_err(bad)?.clone();
    if header.get(0) != Some("Instance") {
        return Err(BenchError::Results("first column must be `Instance`".into()));
    }
    let labels: Vec<ConfigLabel> = header.iter().skip(1).map(ConfigLabel::parse).collect();
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(bad)?;
        let inst = rec.get(0).unwrap_or_default();
        for (label, cell) in labels.iter().zip(rec.iter().skip(1)) {
            let cell = cell.trim();
            if cell.is_empty() {
                continue;
            }
            let tok = cell.split_whitespace().next().unwrap_or_default();
            let value = match tok {
                "inf" => None,
                t => Some(
                    t.parse::<i64>()
                        .map_err(|_| BenchError::Results(format!("instance `{inst}`: bad cell `{cell}`")))?,
                ),
            };
            out.push(RunResult::summary(inst, label.clone(), value));
        }
    }
    Ok((out, metadata))
}
