//! Output formatting: JSON with 17 significant digits, CSV, and aligned text
//! tables.

use serde::ser::{Error as _, SerializeMap};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use qamean::{BoundReport, Interval};

/// Renders `v` with 17 significant digits so it round-trips exactly.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// A float serialized with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(fmt17(self.0)).map_err(S::Error::custom)?.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

/// Ordered `name → value` pairs as a JSON object.
pub struct Params<'a>(pub &'a [(&'static str, f64)]);

impl Serialize for Params<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, &F17(*v))?;
        }
        m.end()
    }
}

#[derive(Serialize)]
pub struct IntervalJson {
    lo: F17,
    hi: F17,
    lo_closed: bool,
    hi_closed: bool,
}

impl From<&Interval> for IntervalJson {
    fn from(u: &Interval) -> Self {
        Self { lo: F17(u.lo()), hi: F17(u.hi()), lo_closed: u.lo_closed(), hi_closed: u.hi_closed() }
    }
}

#[derive(Serialize)]
pub struct ArgJson {
    pub x: F17,
    pub z: F17,
    pub theta: F17,
}

#[derive(Serialize)]
pub struct RhoJson {
    pub value: F17,
    pub arg: ArgJson,
    pub gap: F17,
    pub evaluations: u64,
    pub on_boundary: bool,
}

impl From<&qamean::RhoEstimate> for RhoJson {
    fn from(r: &qamean::RhoEstimate) -> Self {
        Self {
            value: F17(r.value),
            arg: ArgJson { x: F17(r.arg.x), z: F17(r.arg.z), theta: F17(r.arg.theta) },
            gap: F17(r.refinement_gap),
            evaluations: r.evaluations,
            on_boundary: r.on_boundary,
        }
    }
}

#[derive(Serialize)]
struct BoundJson<'a> {
    name: &'a str,
    kind: &'a str,
    value: Option<F17>,
    applicable: bool,
    params: Params<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct SandwichJson {
    max_lower: F17,
    min_upper: F17,
    holds: bool,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    pair: [&'a str; 2],
    interval: IntervalJson,
    #[serde(rename = "K")]
    k: F17,
    epsilon: F17,
    star_norm_f: F17,
    star_norm_g: F17,
    rho: RhoJson,
    sandwich: SandwichJson,
    bounds: Vec<BoundJson<'a>>,
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializing plain data cannot fail")
}

pub fn report_json(r: &BoundReport) -> String {
    let j = ReportJson {
        pair: [&r.pair.0, &r.pair.1],
        interval: (&r.interval).into(),
        k: F17(r.measures.k),
        epsilon: F17(r.measures.epsilon),
        star_norm_f: F17(r.measures.star_f),
        star_norm_g: F17(r.measures.star_g),
        rho: (&r.rho).into(),
        sandwich: SandwichJson {
            max_lower: F17(r.sandwich.max_lower),
            min_upper: F17(r.sandwich.min_upper),
            holds: r.sandwich.holds,
        },
        bounds: r
            .entries
            .iter()
            .map(|e| BoundJson {
                name: e.name,
                kind: e.kind.as_str(),
                value: e.applicable.then_some(F17(e.value)),
                applicable: e.applicable,
                params: Params(&e.params),
                note: e.note.as_deref(),
            })
            .collect(),
    };
    to_json(&j)
}

/// Comma-separated rows; fields containing commas or quotes are quoted.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let field = |s: &str| {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|s| field(s)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn report_csv(r: &BoundReport) -> String {
    let rows: Vec<Vec<String>> = r
        .entries
        .iter()
        .map(|e| {
            let value = if e.applicable { fmt17(e.value) } else { String::new() };
            vec![e.name.to_string(), value, e.applicable.to_string()]
        })
        .collect();
    csv(&["name", "value", "applicable"], &rows)
}

/// Left-aligned text columns padded to the widest cell.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn report_table(r: &BoundReport) -> String {
    let m = &r.measures;
    let mut out = format!(
        "pair      {} vs {}\ninterval  {}\nK         {}\nepsilon   {}\nrho       {} at x = {}, z = {}, theta = {}\n\n",
        r.pair.0,
        r.pair.1,
        r.interval,
        fmt_short(m.k),
        fmt_short(m.epsilon),
        fmt_short(r.rho.value),
        fmt_short(r.rho.arg.x),
        fmt_short(r.rho.arg.z),
        fmt_short(r.rho.arg.theta),
    );
    let rows: Vec<Vec<String>> = r
        .entries
        .iter()
        .map(|e| {
            let value = if e.applicable { fmt_short(e.value) } else { "n/a".into() };
            let detail = match &e.note {
                Some(n) => n.clone(),
                None => e.params.iter().map(|(k, v)| format!("{k}={}", fmt_short(*v))).collect::<Vec<_>>().join(" "),
            };
            vec![e.name.to_string(), e.kind.as_str().to_string(), value, detail]
        })
        .collect();
    out.push_str(&table(&["bound", "kind", "value", "details"], &rows));
    out.push_str(&format!(
        "\nsandwich  {} <= {} <= {}: {}\n",
        fmt_short(r.sandwich.max_lower),
        fmt_short(r.sandwich.rho),
        fmt_short(r.sandwich.min_upper),
        if r.sandwich.holds { "holds" } else { "VIOLATED" }
    ));
    out
}

/// Up to seven decimals, or scientific notation for very small or large magnitudes.
pub fn fmt_short(v: f64) -> String {
    if v == 0.0 || (1e-4..1e6).contains(&v.abs()) {
        let s = format!("{v:.7}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".into()
        } else {
            s.to_string()
        }
    } else {
        format!("{v:.6e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.1262368467394574e-1, -7.5e-300, 0.0] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(serde_json::to_string(&F17(f64::INFINITY)).unwrap(), "null");
        assert_eq!(serde_json::to_string(&F17(0.5)).unwrap(), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_quotes_when_needed() {
        let s = csv(&["a", "b"], &[vec!["x,y".into(), "plain".into()]]);
        assert_eq!(s, "a,b\n\"x,y\",plain\n");
    }

    #[test]
    fn short_format() {
        assert_eq!(fmt_short(0.2126236846), "0.2126237");
        assert_eq!(fmt_short(20.0), "20");
        assert_eq!(fmt_short(3.19184e-17), "3.191840e-17");
    }
}
