//! Line-oriented text formats for configurations and certificates.
//!
//! Rationals are written `p/q` or `p`; `#` starts a comment; blank lines are
//! ignored. Serialization is canonical, so `parse(serialize(x)) == x` and
//! identical values serialize to identical bytes.
//!
//! ```text
//! tvpm-config v1
//! d 1
//! r 2
//! mode classical
//! points 3
//! 0 : 0
//! 1 : 1
//! 2 : 3
//! mu : 2
//! ```
//!
//! ```text
//! tvpm-cert v1
//! d 1
//! r 2
//! mu : 2
//! rainbow false
//! blocks 2
//! B0 : 0
//! B1 : 1 2
//! coefficients 3
//! 0 : 1
//! 1 : 3/2
//! 2 : -1/2
//! b : 0
//! beta : 1/2
//! w : -1
//! alpha : -2
//! ```
//!
//! Colored configurations add `colors <k>` followed by `C<i> : <vertices>`
//! lines; certificates carry the same section when they record a coloring.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::arith::{format_scalar, parse_scalar, Point, Scalar};
use crate::model::{CertificateError, Coloring, Configuration, Face, ModelError, Mode, PlusMinusCertificate};
use crate::separation::Hyperplane;

pub const CONFIG_HEADER: &str = "tvpm-config v1";
pub const CERT_HEADER: &str = "tvpm-cert v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Eof(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        let item = self.peek().ok_or_else(|| FormatError::Eof(format!("expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    /// Next line must be `<key> <value>`; returns the value.
    fn keyword(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (line, text) = self.next(key)?;
        let (k, v) = split_key(text);
        if k != key {
            return Err(syntax(line, format!("expected `{key}`, found `{k}`")));
        }
        Ok((line, v))
    }

    /// Next line must be `<label> : <values>`; returns the values.
    fn labeled(&mut self, label: &str) -> Result<(usize, &'a str), FormatError> {
        let (line, text) = self.next(label)?;
        let (l, v) = split_label(line, text)?;
        if l != label {
            return Err(syntax(line, format!("expected `{label} :`, found `{l} :`")));
        }
        Ok((line, v))
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn split_key(text: &str) -> (&str, &str) {
    match text.split_once(char::is_whitespace) {
        Some((k, v)) => (k, v.trim()),
        None => (text, ""),
    }
}

fn split_label(line: usize, text: &str) -> Result<(&str, &str), FormatError> {
    let (l, v) = text.split_once(':').ok_or_else(|| syntax(line, "expected `<label> : <values>`"))?;
    Ok((l.trim(), v.trim()))
}

fn parse_usize(line: usize, s: &str) -> Result<usize, FormatError> {
    s.parse().map_err(|_| syntax(line, format!("expected a nonnegative integer, found `{s}`")))
}

fn parse_indices(line: usize, s: &str) -> Result<Vec<usize>, FormatError> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_usize(line, t))
        .collect()
}

fn parse_scalars(line: usize, s: &str) -> Result<Vec<Scalar>, FormatError> {
    s.split_whitespace()
        .map(|t| parse_scalar(t).map_err(|e| syntax(line, e.to_string())))
        .collect()
}

fn parse_one_scalar(line: usize, s: &str) -> Result<Scalar, FormatError> {
    let mut v = parse_scalars(line, s)?;
    if v.len() != 1 {
        return Err(syntax(line, "expected exactly one rational"));
    }
    Ok(v.remove(0))
}

fn parse_header(lines: &mut Lines<'_>, header: &str) -> Result<(), FormatError> {
    let (line, text) = lines.next("header")?;
    if text.split_whitespace().collect::<Vec<_>>().join(" ") != header {
        return Err(syntax(line, format!("expected header `{header}`")));
    }
    Ok(())
}

fn parse_colors(lines: &mut Lines<'_>, count: usize) -> Result<Vec<Vec<usize>>, FormatError> {
    (0..count)
        .map(|i| {
            let (line, v) = lines.labeled(&format!("C{i}"))?;
            parse_indices(line, v)
        })
        .collect()
}

fn join_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn join_scalars(v: &[Scalar]) -> String {
    v.iter().map(format_scalar).collect::<Vec<_>>().join(" ")
}

fn labeled_line(out: &mut String, label: &str, values: &str) {
    if values.is_empty() {
        let _ = writeln!(out, "{label} :");
    } else {
        let _ = writeln!(out, "{label} : {values}");
    }
}

fn write_colors(out: &mut String, coloring: &Coloring) {
    let _ = writeln!(out, "colors {}", coloring.classes().len());
    for (i, class) in coloring.classes().iter().enumerate() {
        labeled_line(out, &format!("C{i}"), &join_indices(class));
    }
}

/// Parses and validates a configuration file.
pub fn parse_configuration(text: &str) -> Result<Configuration, FormatError> {
    let mut lines = Lines::new(text);
    parse_header(&mut lines, CONFIG_HEADER)?;
    let (line, v) = lines.keyword("d")?;
    let d = parse_usize(line, v)?;
    let (line, v) = lines.keyword("r")?;
    let r = parse_usize(line, v)?;
    let (line, v) = lines.keyword("mode")?;
    let mode = match v {
        "classical" => Mode::Classical,
        "colored" => Mode::Colored,
        other => return Err(syntax(line, format!("unknown mode `{other}`"))),
    };
    let (line, v) = lines.keyword("points")?;
    let count = parse_usize(line, v)?;
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let (line, v) = lines.labeled(&i.to_string())?;
        points.push(Point::new(parse_scalars(line, v)?));
    }
    let mut classes = None;
    let mut mu = None;
    while let Some((line, text)) = lines.peek() {
        if text.starts_with("colors") {
            lines.pos += 1;
            if classes.is_some() {
                return Err(syntax(line, "duplicate `colors` section"));
            }
            let (_, v) = split_key(text);
            let k = parse_usize(line, v)?;
            classes = Some(parse_colors(&mut lines, k)?);
        } else if text.starts_with("mu") {
            lines.pos += 1;
            if mu.is_some() {
                return Err(syntax(line, "duplicate `mu` line"));
            }
            let (l, v) = split_label(line, text)?;
            if l != "mu" {
                return Err(syntax(line, format!("unexpected `{l}`")));
            }
            mu = Some(Face::new(parse_indices(line, v)?)?);
        } else {
            return Err(syntax(line, format!("unexpected line `{text}`")));
        }
    }
    if r < 2 {
        return Err(ModelError::BadR(r).into());
    }
    let n = points.len();
    let coloring = classes.map(|c| Coloring::new(c, n, r)).transpose()?;
    Ok(Configuration::new(d, r, points, mode, coloring, mu.unwrap_or_default())?)
}

pub fn serialize_configuration(config: &Configuration) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CONFIG_HEADER}");
    let _ = writeln!(out, "d {}", config.d());
    let _ = writeln!(out, "r {}", config.r());
    let _ = writeln!(out, "mode {}", config.mode());
    let _ = writeln!(out, "points {}", config.len());
    for (i, p) in config.points().iter().enumerate() {
        labeled_line(&mut out, &i.to_string(), &join_scalars(p.coords()));
    }
    if let Some(c) = config.coloring() {
        write_colors(&mut out, c);
    }
    labeled_line(&mut out, "mu", &join_indices(config.mu().vertices()));
    out
}

/// Parses a certificate and checks every invariant that does not depend on
/// the point coordinates.
pub fn parse_certificate(text: &str) -> Result<PlusMinusCertificate, FormatError> {
    let mut lines = Lines::new(text);
    parse_header(&mut lines, CERT_HEADER)?;
    let (line, v) = lines.keyword("d")?;
    let d = parse_usize(line, v)?;
    let (line, v) = lines.keyword("r")?;
    let r = parse_usize(line, v)?;
    let (line, v) = lines.labeled("mu")?;
    let mu = Face::new(parse_indices(line, v)?)?;
    let (line, v) = lines.keyword("rainbow")?;
    let rainbow = match v {
        "true" => true,
        "false" => false,
        other => return Err(syntax(line, format!("expected true or false, found `{other}`"))),
    };
    let (line, v) = lines.keyword("blocks")?;
    let nblocks = parse_usize(line, v)?;
    let mut blocks = Vec::with_capacity(nblocks);
    for j in 0..nblocks {
        let (line, v) = lines.labeled(&format!("B{j}"))?;
        blocks.push(parse_indices(line, v)?);
    }
    let (line, v) = lines.keyword("coefficients")?;
    let ncoef = parse_usize(line, v)?;
    let mut signed_coefficients = BTreeMap::new();
    for _ in 0..ncoef {
        let (line, text) = lines.next("coefficient")?;
        let (l, v) = split_label(line, text)?;
        let vertex = parse_usize(line, l)?;
        if signed_coefficients.insert(vertex, parse_one_scalar(line, v)?).is_some() {
            return Err(syntax(line, format!("duplicate coefficient for vertex {vertex}")));
        }
    }
    let (line, v) = lines.labeled("b")?;
    let point_b = Point::new(parse_scalars(line, v)?);
    let (line, v) = lines.labeled("beta")?;
    let beta = parse_one_scalar(line, v)?;
    let (line, v) = lines.labeled("w")?;
    let w = parse_scalars(line, v)?;
    let (line, v) = lines.labeled("alpha")?;
    let alpha = parse_one_scalar(line, v)?;
    let mut coloring = None;
    if let Some((line, text)) = lines.peek() {
        let (k, v) = split_key(text);
        if k != "colors" {
            return Err(syntax(line, format!("unexpected line `{text}`")));
        }
        lines.pos += 1;
        let count = parse_usize(line, v)?;
        let classes = parse_colors(&mut lines, count)?;
        if r < 2 {
            return Err(ModelError::BadR(r).into());
        }
        coloring = Some(Coloring::new(classes, crate::model::tverberg_point_count(d, r), r)?);
    }
    if let Some((line, text)) = lines.peek() {
        return Err(syntax(line, format!("unexpected line `{text}`")));
    }
    let cert = PlusMinusCertificate {
        d,
        r,
        mu,
        blocks,
        signed_coefficients,
        point_b,
        beta,
        hyperplane: Hyperplane { w, alpha },
        rainbow,
        coloring,
    };
    cert.validate()?;
    Ok(cert)
}

pub fn serialize_certificate(cert: &PlusMinusCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CERT_HEADER}");
    let _ = writeln!(out, "d {}", cert.d);
    let _ = writeln!(out, "r {}", cert.r);
    labeled_line(&mut out, "mu", &join_indices(cert.mu.vertices()));
    let _ = writeln!(out, "rainbow {}", cert.rainbow);
    let _ = writeln!(out, "blocks {}", cert.blocks.len());
    for (j, block) in cert.blocks.iter().enumerate() {
        labeled_line(&mut out, &format!("B{j}"), &join_indices(block));
    }
    let _ = writeln!(out, "coefficients {}", cert.signed_coefficients.len());
    for (v, c) in &cert.signed_coefficients {
        let _ = writeln!(out, "{v} : {}", format_scalar(c));
    }
    labeled_line(&mut out, "b", &join_scalars(cert.point_b.coords()));
    labeled_line(&mut out, "beta", &format_scalar(&cert.beta));
    labeled_line(&mut out, "w", &join_scalars(&cert.hyperplane.w));
    labeled_line(&mut out, "alpha", &format_scalar(&cert.hyperplane.alpha));
    if let Some(c) = &cert.coloring {
        write_colors(&mut out, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};
    use crate::model::PartitionError;

    const WORKED: &str = "tvpm-config v1\nd 1\nr 2\nmode classical\npoints 3\n0 : 0\n1 : 1\n2 : 3\nmu : 2\n";

    const WORKED_CERT: &str = "tvpm-cert v1
d 1
r 2
mu : 2
rainbow false
blocks 2
B0 : 0
B1 : 1 2
coefficients 3
0 : 1
1 : 3/2
2 : -1/2
b : 0
beta : 1/2
w : -1
alpha : -2
";

    #[test]
    fn minimal_classical_file() {
        let text = "tvpm-config v1\nd 1\nr 2\nmode classical\npoints 3\n0 : 0\n1 : 1\n2 : 2\n";
        let c = parse_configuration(text).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.mu().is_empty());
        assert_eq!(c.point(2), &Point::from_ints(&[2]));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# worked instance\ntvpm-config v1\n\nd 1   # dimension\nr 2\nmode classical\npoints 3\n0 : 0\n1 : 1/2\n2 : -3\nmu :\n";
        let c = parse_configuration(text).unwrap();
        assert_eq!(c.point(1)[0], frac(1, 2));
        assert!(c.mu().is_empty());
    }

    #[test]
    fn colored_composite_r_is_rejected() {
        let mut text = String::from("tvpm-config v1\nd 1\nr 4\nmode colored\npoints 7\n");
        for i in 0..7 {
            text += &format!("{i} : {i}\n");
        }
        text += "colors 3\nC0 : 0 1 2\nC1 : 3 4 5\nC2 : 6\n";
        assert_eq!(parse_configuration(&text), Err(FormatError::Model(ModelError::NonPrimeR(4))));
    }

    #[test]
    fn figure_shaped_file() {
        let text = "tvpm-config v1
d 2
r 3
mode colored
points 7
0 : 0 0
1 : 1 0
2 : 0 1
3 : 1 1
4 : 2 3
5 : 5 1
6 : 3 7
colors 4
C0 : 0 4
C1 : 1 6
C2 : 2 5
C3 : 3
mu : 0 1
";
        let c = parse_configuration(text).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.coloring().unwrap().classes().len(), 4);
        assert_eq!(c.mu().vertices(), &[0, 1]);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_configuration(""), Err(FormatError::Eof(_))));
        assert!(matches!(parse_configuration("tvpm-config v2\n"), Err(FormatError::Syntax { line: 1, .. })));
        let bad_rat = WORKED.replace("2 : 3", "2 : 3/0");
        assert!(matches!(parse_configuration(&bad_rat), Err(FormatError::Syntax { line: 8, .. })));
        let wrong_count = WORKED.replace("points 3", "points 2").replace("2 : 3\n", "");
        assert!(matches!(parse_configuration(&wrong_count), Err(FormatError::Model(ModelError::WrongPointCount { .. }))));
        let out_of_range = WORKED.replace("mu : 2", "mu : 3");
        assert!(matches!(parse_configuration(&out_of_range), Err(FormatError::Model(ModelError::IndexOutOfRange { .. }))));
        let trailing = format!("{WORKED}extra 1\n");
        assert!(matches!(parse_configuration(&trailing), Err(FormatError::Syntax { line: 10, .. })));
    }

    #[test]
    fn color_class_too_large() {
        let text = WORKED.replace("mode classical", "mode colored").replace("mu : 2\n", "colors 2\nC0 : 0 1\nC1 : 2\n");
        assert!(matches!(
            parse_configuration(&text),
            Err(FormatError::Model(ModelError::ColorClassTooLarge { class: 0, size: 2, limit: 1 }))
        ));
    }

    #[test]
    fn configuration_roundtrip() {
        let c = parse_configuration(WORKED).unwrap();
        assert_eq!(serialize_configuration(&c), WORKED);
        assert_eq!(parse_configuration(&serialize_configuration(&c)).unwrap(), c);
    }

    #[test]
    fn certificate_roundtrip() {
        let cert = parse_certificate(WORKED_CERT).unwrap();
        assert_eq!(cert.beta, frac(1, 2));
        assert_eq!(cert.hyperplane.alpha, int(-2));
        assert_eq!(serialize_certificate(&cert), WORKED_CERT);
        assert_eq!(parse_certificate(&serialize_certificate(&cert)).unwrap(), cert);
    }

    #[test]
    fn certificate_with_bad_sum() {
        let text = WORKED_CERT.replace("1 : 3/2", "1 : 1/2");
        assert_eq!(parse_certificate(&text), Err(FormatError::Certificate(CertificateError::BlockSum(1))));
    }

    #[test]
    fn certificate_with_overlapping_blocks() {
        let text = WORKED_CERT.replace("B0 : 0", "B0 : 0 1");
        assert_eq!(
            parse_certificate(&text),
            Err(FormatError::Certificate(CertificateError::Blocks(PartitionError::Overlap(1))))
        );
    }

    #[test]
    fn certificate_other_violations() {
        let text = WORKED_CERT.replace("beta : 1/2", "beta : -1/2");
        assert_eq!(parse_certificate(&text), Err(FormatError::Certificate(CertificateError::BetaNotPositive)));
        let text = WORKED_CERT.replace("rainbow false", "rainbow true");
        assert_eq!(parse_certificate(&text), Err(FormatError::Certificate(CertificateError::MissingColoring)));
        let text = WORKED_CERT.replace("w : -1", "w : 0");
        assert_eq!(parse_certificate(&text), Err(FormatError::Certificate(CertificateError::ZeroNormal)));
        let text = WORKED_CERT.replace("0 : 1\n1 : 3/2", "0 : 1\n0 : 3/2");
        assert!(matches!(parse_certificate(&text), Err(FormatError::Syntax { .. })));
    }

    #[test]
    fn rainbow_certificate_roundtrip() {
        let text = WORKED_CERT.replace("rainbow false", "rainbow true") + "colors 3\nC0 : 2\nC1 : 0\nC2 : 1\n";
        let cert = parse_certificate(&text).unwrap();
        assert!(cert.rainbow);
        assert_eq!(serialize_certificate(&cert), text);
    }
}
