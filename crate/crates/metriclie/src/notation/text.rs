//! Text formats: algebras as tuples of generator differentials
//! (`"(0,0,e12)"`) and metrics as sums of symmetric products
//! (`"e1.e3+1/2*e2*e2-e4*e4"`). Parsing accepts coefficient expressions with
//! parameters; printing emits the canonical form (terms sorted by
//! multi-index, coefficients in lowest terms, `-` attached).

use super::expr::{eval_expr, Params};
use super::ParseError;
use crate::error::Error;
use crate::exactnum::{Matrix, Scalar};
use crate::exterior::KForm;
use crate::liealg::LieAlgebra;

/// Splits on top-level commas, respecting parentheses and brackets.
fn split_top_level(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, b) in src.bytes().enumerate() {
        match b {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth = depth.saturating_sub(1),
            b',' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

struct TermScanner<'a> {
    src: &'a str,
    pos: usize,
    params: &'a Params,
}

impl<'a> TermScanner<'a> {
    fn new(src: &'a str, params: &'a Params) -> Self {
        TermScanner { src, pos: 0, params }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn done(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    /// True when an `e`-term starts at the current position.
    fn at_eterm(&mut self) -> bool {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        bytes.get(self.pos) == Some(&b'e')
            && matches!(bytes.get(self.pos + 1), Some(b) if b.is_ascii_digit() || *b == b'[')
    }

    /// Optional sign; returns -1 or +1.
    fn sign(&mut self) -> i64 {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        }
    }

    /// Parses `[coefficient *]` in front of an e-term; `None` when the term
    /// starts directly with `e`.
    fn coefficient(&mut self) -> Result<Option<Scalar>, ParseError> {
        self.skip_ws();
        if self.at_eterm() {
            return Ok(None);
        }
        let bytes = self.src.as_bytes();
        let start = self.pos;
        if bytes.get(self.pos) == Some(&b'(') {
            let mut depth = 0usize;
            while self.pos < bytes.len() {
                match bytes[self.pos] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            self.pos += 1;
                            break;
                        }
                    }
                    _ => {}
                }
                self.pos += 1;
            }
            if depth != 0 {
                return Err(self.error("unbalanced parentheses"));
            }
        } else {
            // scan the literal until `*` or the start of an e-term
            while self.pos < bytes.len() {
                let b = bytes[self.pos];
                if b == b'*' {
                    break;
                }
                if b == b'e'
                    && matches!(bytes.get(self.pos + 1), Some(nb) if nb.is_ascii_digit() || *nb == b'[')
                {
                    break;
                }
                if b == b'+' || b == b'-' || b == b',' {
                    return Err(self.error("expected an e-term after the coefficient"));
                }
                self.pos += 1;
            }
        }
        let text = &self.src[start..self.pos];
        if text.trim().is_empty() {
            return Err(self.error("empty coefficient"));
        }
        let value = eval_expr(text, self.params)?;
        self.skip_ws();
        if self.src.as_bytes().get(self.pos) == Some(&b'*') {
            self.pos += 1;
        }
        Ok(Some(value))
    }

    /// Parses `e<digits>` or `e[i,j,...]`, returning 0-based indices.
    fn eterm(&mut self, dim: usize) -> Result<Vec<usize>, ParseError> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        if bytes.get(self.pos) != Some(&b'e') {
            return Err(self.error("expected an e-term"));
        }
        self.pos += 1;
        let mut indices = Vec::new();
        if bytes.get(self.pos) == Some(&b'[') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let start = self.pos;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == start {
                    return Err(self.error("expected an index"));
                }
                let idx: usize = self.src[start..self.pos].parse().unwrap();
                indices.push(idx);
                self.skip_ws();
                match bytes.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `]`")),
                }
            }
        } else {
            let start = self.pos;
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.error("expected digits after `e`"));
            }
            for c in self.src[start..self.pos].bytes() {
                indices.push((c - b'0') as usize);
            }
        }
        for &idx in &indices {
            if idx == 0 || idx > dim {
                return Err(ParseError::IndexOutOfRange { index: idx, dim });
            }
        }
        Ok(indices.iter().map(|&i| i - 1).collect())
    }
}

/// Parses one differential slot ("0" or a sum of 2-form terms).
fn parse_two_form(src: &str, dim: usize, params: &Params) -> Result<KForm, ParseError> {
    let mut form = KForm::zero(dim, 2);
    let trimmed = src.trim();
    if trimmed == "0" {
        return Ok(form);
    }
    let mut sc = TermScanner::new(src, params);
    let mut first = true;
    while !sc.done() {
        if !first && !matches!(sc.peek(), Some(b'+') | Some(b'-')) {
            return Err(sc.error("expected `+` or `-` between terms"));
        }
        let sign = sc.sign();
        let coef = sc.coefficient()?.unwrap_or_else(Scalar::one);
        let indices = sc.eterm(dim)?;
        if indices.len() != 2 {
            return Err(sc.error("differential terms must have two indices"));
        }
        if indices[0] == indices[1] {
            return Err(sc.error("repeated index"));
        }
        form.add_term(&indices, &(&Scalar::from_int(sign) * &coef));
        first = false;
    }
    Ok(form)
}

/// Parses an algebra tuple such as `"(0,0,e12,0)"`; dimension is the number
/// of slots. Coefficients may reference `params`.
pub fn parse_algebra_with_params(src: &str, params: &Params) -> Result<LieAlgebra, ParseError> {
    let t = src.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return Err(ParseError::Syntax { pos: 0, msg: "algebra must be a parenthesized tuple".into() });
    }
    let inner = &t[1..t.len() - 1];
    let slots: Vec<&str> = if inner.trim().is_empty() { Vec::new() } else { split_top_level(inner) };
    let dim = slots.len();
    let diffs: Vec<KForm> = slots
        .iter()
        .map(|s| parse_two_form(s, dim, params))
        .collect::<Result<_, _>>()?;
    LieAlgebra::from_differentials(&diffs).map_err(|e| match e {
        Error::JacobiViolation { i, j, k } => ParseError::Jacobi { i, j, k },
        other => ParseError::Syntax { pos: 0, msg: other.to_string() },
    })
}

pub fn parse_algebra(src: &str) -> Result<LieAlgebra, ParseError> {
    parse_algebra_with_params(src, &Params::new())
}

/// Canonical coefficient literal in the text formats.
fn format_coef(s: &Scalar) -> Option<String> {
    fn rat_str(r: &num::BigRational) -> String {
        use num::One;
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    match s {
        Scalar::Rational(r) => {
            use num::One;
            if r.is_one() {
                None
            } else if (-r).is_one() {
                Some("-".into())
            } else {
                Some(format!("{}*", rat_str(r)))
            }
        }
        Scalar::Quadratic { a, b, d } => {
            use num::Zero;
            if a.is_zero() {
                Some(format!("{}r{}*", rat_str(b), d))
            } else {
                use num::Signed;
                let (op, babs) = if b.is_negative() { ("-", -b) } else { ("+", b.clone()) };
                Some(format!("({}{op}{}r{})*", rat_str(a), rat_str(&babs), d))
            }
        }
        Scalar::Float(x) => Some(format!("{x}f*")),
    }
}

fn format_eterm(indices: &[usize], dim: usize) -> String {
    if dim <= 9 {
        let digits: String = indices.iter().map(|i| (i + 1).to_string()).collect();
        format!("e{digits}")
    } else {
        let list: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
        format!("e[{}]", list.join(","))
    }
}

fn format_sum(terms: Vec<(Vec<usize>, Scalar)>, dim: usize) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (indices, coef) in terms {
        let body = format_eterm(&indices, dim);
        let piece = match format_coef(&coef) {
            None => body,
            Some(prefix) if prefix == "-" => format!("-{body}"),
            Some(prefix) => format!("{prefix}{body}"),
        };
        if !out.is_empty() && !piece.starts_with('-') {
            out.push('+');
        }
        out.push_str(&piece);
    }
    out
}

/// Canonical algebra text: terms sorted by multi-index, coefficients in
/// lowest terms, `-` attached to the coefficient.
pub fn print_algebra(alg: &LieAlgebra) -> String {
    let dim = alg.dim();
    let slots: Vec<String> = alg
        .differentials()
        .iter()
        .map(|dk| {
            let terms: Vec<(Vec<usize>, Scalar)> =
                dk.terms().map(|(i, c)| (i, c.clone())).collect();
            format_sum(terms, dim)
        })
        .collect();
    format!("({})", slots.join(","))
}

/// Parses a metric as a sum of `c*ei.ej` (symmetric product) and `c*ei*ej`
/// (tensor product) terms; tensor terms off the diagonal must come with a
/// matching symmetric partner.
pub fn parse_metric_with_params(
    src: &str,
    dim: usize,
    params: &Params,
) -> Result<Matrix, ParseError> {
    let mut g = Matrix::zeros(dim, dim);
    let mut tensor = Matrix::zeros(dim, dim);
    let trimmed = src.trim();
    if trimmed == "0" {
        return Ok(g);
    }
    let mut sc = TermScanner::new(src, params);
    let mut first = true;
    while !sc.done() {
        if !first && !matches!(sc.peek(), Some(b'+') | Some(b'-')) {
            return Err(sc.error("expected `+` or `-` between terms"));
        }
        let sign = sc.sign();
        let coef = sc.coefficient()?.unwrap_or_else(Scalar::one);
        let coef = &Scalar::from_int(sign) * &coef;
        let left = sc.eterm(dim)?;
        if left.len() != 1 {
            return Err(sc.error("metric terms pair single indices"));
        }
        sc.skip_ws();
        let op = sc.peek().ok_or_else(|| sc.error("expected `.` or `*`"))?;
        if op != b'.' && op != b'*' {
            return Err(sc.error("expected `.` or `*`"));
        }
        sc.pos += 1;
        let right = sc.eterm(dim)?;
        if right.len() != 1 {
            return Err(sc.error("metric terms pair single indices"));
        }
        let (i, j) = (left[0], right[0]);
        if op == b'.' {
            // e^i (.) e^j = e^i (x) e^j + e^j (x) e^i
            g[(i, j)] = &g[(i, j)] + &coef;
            g[(j, i)] = &g[(j, i)] + &coef;
        } else {
            tensor[(i, j)] = &tensor[(i, j)] + &coef;
        }
        first = false;
    }
    for i in 0..dim {
        for j in 0..dim {
            if tensor[(i, j)] != tensor[(j, i)] {
                return Err(ParseError::Asymmetric { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(&g + &tensor)
}

pub fn parse_metric(src: &str, dim: usize) -> Result<Matrix, ParseError> {
    parse_metric_with_params(src, dim, &Params::new())
}

/// Canonical metric text: diagonal entries as `c*ei*ei`, off-diagonal pairs
/// as `c*ei.ej` with `i < j`, sorted by index pair.
pub fn print_metric(g: &Matrix) -> String {
    let dim = g.rows();
    let mut pieces = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            let c = &g[(i, j)];
            if c.is_zero() {
                continue;
            }
            let body = if i == j {
                let e = format_eterm(&[i], dim);
                format!("{e}*{e}")
            } else {
                format!("{}.{}", format_eterm(&[i], dim), format_eterm(&[j], dim))
            };
            let piece = match format_coef(c) {
                None => body,
                Some(prefix) if prefix == "-" => format!("-{body}"),
                Some(prefix) => format!("{prefix}{body}"),
            };
            pieces.push(piece);
        }
    }
    if pieces.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for piece in pieces {
        if !out.is_empty() && !piece.starts_with('-') {
            out.push('+');
        }
        out.push_str(&piece);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::basis_vector;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn parse_basic_algebras() {
        let h = parse_algebra("(0,0,e12)").unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(h.bracket(&basis_vector(3, 0), &basis_vector(3, 1)), vec![s(0), s(0), s(-1)]);

        let ab = parse_algebra("(0,0,0)").unwrap();
        assert_eq!(ab.nilpotency_step(), Some(1));

        let four = parse_algebra("(0,0,e12,0)").unwrap();
        assert_eq!(four.dim(), 4);
        assert_eq!(print_algebra(&four), "(0,0,e12,0)");

        let empty = parse_algebra("()").unwrap();
        assert_eq!(empty.dim(), 0);
        assert_eq!(print_algebra(&empty), "()");
    }

    #[test]
    fn parse_classification_entry() {
        let text = "(2/3*e17,2/3*e27,1/3*e27+4/3*e37+e12,-1/3*e17+4/3*e47,\
                    2*e13+2*e24+2*e12+2*e57,2*e13+2*e24+2*e12+2*e57,0)";
        let alg = parse_algebra(text).unwrap();
        assert_eq!(alg.dim(), 7);
        // canonical form sorts terms by multi-index
        let canon = print_algebra(&alg);
        assert_eq!(
            canon,
            "(2/3*e17,2/3*e27,e12+1/3*e27+4/3*e37,-1/3*e17+4/3*e47,\
             2*e12+2*e13+2*e24+2*e57,2*e12+2*e13+2*e24+2*e57,0)"
        );
        let reparsed = parse_algebra(&canon).unwrap();
        assert_eq!(print_algebra(&reparsed), canon);
    }

    #[test]
    fn parse_with_parameters_and_surds() {
        let mut params = Params::new();
        params.insert("a".into(), s(1));
        let alg = parse_algebra_with_params("(0,0,(a)*e12,0)", &params).unwrap();
        assert_eq!(print_algebra(&alg), "(0,0,e12,0)");

        let surd = parse_algebra("(1/2r6*e13,0,0)").unwrap();
        assert_eq!(print_algebra(&surd), "(1/2r6*e13,0,0)");
    }

    #[test]
    fn jacobi_failure_reported_with_triple() {
        let res = parse_algebra("(0,0,e12,e34)");
        match res {
            Err(ParseError::Jacobi { .. }) => {}
            other => panic!("expected a Jacobi diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn parse_metrics() {
        let g = parse_metric("e1.e2 + e3.e4", 4).unwrap();
        assert_eq!(g[(0, 1)], s(1));
        assert_eq!(g[(1, 0)], s(1));
        assert_eq!(g[(2, 3)], s(1));
        assert_eq!(g[(0, 0)], s(0));
        assert_eq!(print_metric(&g), "e1.e2+e3.e4");

        let id2 = parse_metric("e1*e1 + e2*e2", 2).unwrap();
        assert_eq!(id2, Matrix::identity(2));

        let ex2 = parse_metric("e1.e3 + 1/2*e2*e2 - e4*e4", 4).unwrap();
        assert_eq!(ex2[(0, 2)], s(1));
        assert_eq!(ex2[(1, 1)], Scalar::rat(1, 2));
        assert_eq!(ex2[(3, 3)], s(-1));
        assert_eq!(print_metric(&ex2), "e1.e3+1/2*e2*e2-e4*e4");
    }

    #[test]
    fn asymmetric_tensor_metric_rejected() {
        assert!(matches!(
            parse_metric("e1*e2", 2),
            Err(ParseError::Asymmetric { .. })
        ));
        // with the matching partner it works and equals e1.e2
        let g = parse_metric("e1*e2 + e2*e1", 2).unwrap();
        assert_eq!(g, parse_metric("e1.e2", 2).unwrap());
    }

    #[test]
    fn bracketed_indices() {
        let alg = parse_algebra("(0,0,0,0,0,0,0,0,0,e[1,2])").unwrap();
        assert_eq!(alg.dim(), 10);
        let canon = print_algebra(&alg);
        assert!(canon.contains("e[1,2]"));
        let back = parse_algebra(&canon).unwrap();
        assert_eq!(print_algebra(&back), canon);
    }

    #[test]
    fn index_out_of_range_rejected() {
        assert!(matches!(
            parse_algebra("(0,0,e14)"),
            Err(ParseError::IndexOutOfRange { index: 4, dim: 3 })
        ));
        // index 0 is invalid in bare-digit form
        assert!(parse_algebra("(0,0,e10)").is_err());
    }
}
