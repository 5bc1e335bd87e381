//! Rendering and parsing of scan reports (pretty table, CSV, JSON).

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::snf::join_factors;
use crate::verify::VerifyReport;

/// Serializes big-integer lists as JSON numbers when they fit in `i64` and as
/// decimal strings otherwise; both forms are accepted when reading.
pub mod bigint_vec {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Repr {
        Small(i64),
        Big(String),
    }

    impl Repr {
        pub(crate) fn from_big(x: &BigInt) -> Self {
            x.to_i64().map_or_else(|| Repr::Big(x.to_string()), Repr::Small)
        }

        pub(crate) fn into_big<E: serde::de::Error>(self) -> Result<BigInt, E> {
            match self {
                Repr::Small(x) => Ok(BigInt::from(x)),
                Repr::Big(s) => s.parse().map_err(E::custom),
            }
        }
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Repr::from_big))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(Repr::into_big)
            .collect()
    }
}

pub mod opt_bigint_vec {
    use super::bigint_vec::Repr;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.iter().map(Repr::from_big).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        Option::<Vec<Repr>>::deserialize(d)?
            .map(|v| v.into_iter().map(Repr::into_big).collect())
            .transpose()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pretty" => Ok(Format::Pretty),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Usage(format!("unknown format `{other}`"))),
        }
    }
}

pub fn render(reports: &[VerifyReport], format: Format) -> Result<String> {
    match format {
        Format::Pretty => Ok(to_pretty(reports)),
        Format::Csv => to_csv(reports),
        Format::Json => to_json(reports),
    }
}

pub fn to_json(reports: &[VerifyReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::MalformedInput(e.to_string()))
}

pub fn from_json(text: &str) -> Result<Vec<VerifyReport>> {
    serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("bad JSON report: {e}")))
}

pub const CSV_HEADER: [&str; 21] = [
    "n",
    "rank_expected",
    "rank_exact",
    "rank_bareiss",
    "rank_hat",
    "rank_wb",
    "rank_wprime",
    "ap_equals_pb",
    "walks_lift",
    "hat_equals_wb",
    "snf_w",
    "snf_wprime",
    "integrally_equiv",
    "main_count",
    "eigpairs_max_residual",
    "eigpairs_max_dot_error",
    "eigpairs_ok",
    "conjectured",
    "conjecture_holds",
    "timings",
    "passed",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn opt_factors(v: &Option<Vec<BigInt>>) -> String {
    v.as_deref().map(join_factors).unwrap_or_default()
}

fn timings_cell(t: &BTreeMap<String, f64>) -> String {
    t.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per report; empty cells for checks that did not run. Factor lists
/// are comma separated, timings are `stage=ms` pairs joined by `;`.
pub fn to_csv(reports: &[VerifyReport]) -> Result<String> {
    let csv_err = |e: csv::Error| Error::MalformedInput(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record([
            r.n.to_string(),
            r.rank_expected.to_string(),
            opt(&r.rank_exact),
            opt(&r.rank_bareiss),
            opt(&r.rank_hat),
            opt(&r.rank_wb),
            opt(&r.rank_wprime),
            opt(&r.ap_equals_pb),
            opt(&r.walks_lift),
            opt(&r.hat_equals_wb),
            opt_factors(&r.snf_w),
            opt_factors(&r.snf_wprime),
            opt(&r.integrally_equiv),
            opt(&r.main_count),
            opt(&r.eigpairs_max_residual),
            opt(&r.eigpairs_max_dot_error),
            opt(&r.eigpairs_ok),
            opt_factors(&r.conjectured),
            opt(&r.conjecture_holds),
            timings_cell(&r.timings),
            r.passed().to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::MalformedInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn parse_cell<T: FromStr>(cell: &str, column: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse()
        .map(Some)
        .map_err(|e| Error::MalformedInput(format!("column {column}: `{cell}`: {e}")))
}

fn parse_factors(cell: &str, column: &str) -> Result<Option<Vec<BigInt>>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.split(',')
        .map(|f| {
            f.parse::<BigInt>()
                .map_err(|e| Error::MalformedInput(format!("column {column}: `{f}`: {e}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn parse_timings(cell: &str) -> Result<BTreeMap<String, f64>> {
    cell.split(';')
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::MalformedInput(format!("bad timing `{pair}`")))?;
            let v = v
                .parse::<f64>()
                .map_err(|e| Error::MalformedInput(format!("bad timing `{pair}`: {e}")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

/// Inverse of [`to_csv`]. The derived `passed` column is ignored.
pub fn from_csv(text: &str) -> Result<Vec<VerifyReport>> {
    let csv_err = |e: csv::Error| Error::MalformedInput(e.to_string());
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::MalformedInput("unexpected CSV header".into()));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let rec = record.map_err(csv_err)?;
        let cell = |name: &str| {
            let idx = CSV_HEADER.iter().position(|h| *h == name).expect("known column");
            rec.get(idx).unwrap_or("")
        };
        let required = |name: &str| -> Result<usize> {
            parse_cell(cell(name), name)?
                .ok_or_else(|| Error::MalformedInput(format!("column {name} is empty")))
        };
        out.push(VerifyReport {
            n: required("n")?,
            rank_expected: required("rank_expected")?,
            rank_exact: parse_cell(cell("rank_exact"), "rank_exact")?,
            rank_bareiss: parse_cell(cell("rank_bareiss"), "rank_bareiss")?,
            rank_hat: parse_cell(cell("rank_hat"), "rank_hat")?,
            rank_wb: parse_cell(cell("rank_wb"), "rank_wb")?,
            rank_wprime: parse_cell(cell("rank_wprime"), "rank_wprime")?,
            ap_equals_pb: parse_cell(cell("ap_equals_pb"), "ap_equals_pb")?,
            walks_lift: parse_cell(cell("walks_lift"), "walks_lift")?,
            hat_equals_wb: parse_cell(cell("hat_equals_wb"), "hat_equals_wb")?,
            snf_w: parse_factors(cell("snf_w"), "snf_w")?,
            snf_wprime: parse_factors(cell("snf_wprime"), "snf_wprime")?,
            integrally_equiv: parse_cell(cell("integrally_equiv"), "integrally_equiv")?,
            main_count: parse_cell(cell("main_count"), "main_count")?,
            eigpairs_max_residual: parse_cell(cell("eigpairs_max_residual"), "eigpairs_max_residual")?,
            eigpairs_max_dot_error: parse_cell(
                cell("eigpairs_max_dot_error"),
                "eigpairs_max_dot_error",
            )?,
            eigpairs_ok: parse_cell(cell("eigpairs_ok"), "eigpairs_ok")?,
            conjectured: parse_factors(cell("conjectured"), "conjectured")?,
            conjecture_holds: parse_cell(cell("conjecture_holds"), "conjecture_holds")?,
            timings: parse_timings(cell("timings"))?,
        });
    }
    Ok(out)
}

fn dash<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

fn yes_no(v: Option<bool>) -> String {
    match v {
        Some(true) => "yes".into(),
        Some(false) => "NO".into(),
        None => "-".into(),
    }
}

/// Human-readable table, one line per `n`.
pub fn to_pretty(reports: &[VerifyReport]) -> String {
    let header = [
        "n", "floor(n/2)", "rank", "hat=W(B)", "snf(W)", "W~W'", "main", "eigpairs", "conjecture",
        "status",
    ];
    let rows: Vec<[String; 10]> = reports
        .iter()
        .map(|r| {
            let hat = match (r.hat_equals_wb, r.ap_equals_pb, r.walks_lift) {
                (None, None, None) => None,
                (h, a, l) => Some(h.unwrap_or(true) && a.unwrap_or(true) && l.unwrap_or(true)),
            };
            let conj = match (r.conjecture_holds, &r.conjectured) {
                (Some(true), _) => "holds".to_string(),
                (Some(false), Some(c)) => format!("fails (expected {})", join_factors(c)),
                _ => "-".to_string(),
            };
            [
                r.n.to_string(),
                r.rank_expected.to_string(),
                dash(&r.rank_exact.or(r.rank_bareiss)),
                yes_no(hat),
                r.snf_w.as_deref().map_or_else(|| "-".into(), join_factors),
                yes_no(r.integrally_equiv),
                dash(&r.main_count),
                yes_no(r.eigpairs_ok),
                conj,
                if r.passed() { "ok" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{scan, verify, Check};

    #[test]
    fn json_round_trip() {
        let reports = scan(4, 9, &Check::all(), 2).unwrap().reports;
        let text = to_json(&reports).unwrap();
        assert_eq!(from_json(&text).unwrap(), reports);
        assert!(text.contains("\"snf_w\": [\n      1,"));
    }

    #[test]
    fn csv_round_trip() {
        let reports = scan(4, 9, &Check::all(), 2).unwrap().reports;
        let text = to_csv(&reports).unwrap();
        assert_eq!(from_csv(&text).unwrap(), reports);
        let partial = scan(5, 6, &[Check::Conjecture].into(), 1).unwrap().reports;
        assert_eq!(from_csv(&to_csv(&partial).unwrap()).unwrap(), partial);
    }

    #[test]
    fn huge_factors_survive_json() {
        let mut r = verify(5).unwrap();
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        r.snf_w = Some(vec![BigInt::from(1), big.clone()]);
        let back = from_json(&to_json(std::slice::from_ref(&r)).unwrap()).unwrap();
        assert_eq!(back[0].snf_w, Some(vec![BigInt::from(1), big]));
    }

    #[test]
    fn pretty_table_has_one_line_per_n() {
        let reports = scan(4, 7, &[Check::Rank].into(), 1).unwrap().reports;
        let table = to_pretty(&reports);
        assert_eq!(table.lines().count(), 5);
        assert!(table.lines().all(|l| !l.contains("FAIL")));
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(from_csv("a,b\n1,2\n").is_err());
        let reports = scan(4, 4, &[Check::Rank].into(), 1).unwrap().reports;
        let text = to_csv(&reports).unwrap().replace(",2,", ",x,");
        assert!(from_csv(&text).is_err());
    }

    #[test]
    fn formats_parse() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
