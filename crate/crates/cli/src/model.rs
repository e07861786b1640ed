//! Model files: a line-oriented description of one metric configuration.
//!
//! ```text
//! # su(2) x R with a Randers profile
//! dim = 4
//! bracket e1 e2 = e3
//! bracket e2 e3 = e1
//! bracket e1 e3 = -e2
//! metric = identity
//! x = 0.4*e4
//! phi = randers
//! tol = 1e-10
//! ```
//!
//! `#` starts a comment, `;` separates statements on one line. `algebra =
//! <name>` pulls structure from the built-in catalog and conflicts with
//! explicit `dim`/`bracket`/`h`/`m` lines. `h` and `m` lines accumulate a
//! reductive decomposition; the metric then lives on the m-coordinates.
//! Everything except the structure has a default: identity metric, x = 0,
//! riemannian profile, tol = 1e-10.

use finsler_core::{
    catalog, AlphaBetaMetric, Error as CoreError, InnerProduct, IpDomain, LieAlgebra,
    PhiFunction, ReductiveDecomposition, Vector,
};

use crate::expr;

pub const DEFAULT_MODEL_TOL: f64 = 1e-10;

/// Everything a command needs, still in parts so overrides can swap one
/// piece and re-validate.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub algebra: LieAlgebra,
    pub dec: ReductiveDecomposition,
    pub a: InnerProduct,
    pub x: Vector,
    pub phi: PhiFunction,
    pub tol: f64,
}

impl ModelBundle {
    /// The assembled metric. Parsing already validated the combination, so
    /// this only fails for bundles patched together by hand.
    pub fn build_metric(&self) -> finsler_core::Result<AlphaBetaMetric> {
        AlphaBetaMetric::new(
            &self.algebra,
            &self.dec,
            self.a.clone(),
            self.x.clone(),
            self.phi.clone(),
        )
    }
}

impl PartialEq for ModelBundle {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra
            && self.dec.is_trivial() == other.dec.is_trivial()
            && self.dec.h_basis() == other.dec.h_basis()
            && self.dec.m_basis() == other.dec.m_basis()
            && self.a == other.a
            && self.x == other.x
            && self.phi == other.phi
            && self.tol.to_bits() == other.tol.to_bits()
    }
}

/// One problem found in a model file. `line` 0 means the file as a whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.code, self.message)
        } else {
            write!(f, "{}:{}:{}: {}", self.line, self.col, self.code, self.message)
        }
    }
}

pub const E_SYNTAX: &str = "E_SYNTAX";
pub const E_KEY: &str = "E_KEY";
pub const E_INDEX: &str = "E_INDEX";
pub const E_DUP: &str = "E_DUP";
pub const E_MISSING: &str = "E_MISSING";
pub const E_EXPR: &str = "E_EXPR";
pub const E_NUMBER: &str = "E_NUMBER";
pub const E_JACOBI: &str = "E_JACOBI";
pub const E_SPD: &str = "E_SPD";
pub const E_NORM_BOUND: &str = "E_NORM_BOUND";
pub const E_PHI_CONDITION: &str = "E_PHI_CONDITION";
pub const E_PHI: &str = "E_PHI";
pub const E_DECOMP: &str = "E_DECOMP";
pub const E_X_NOT_IN_M: &str = "E_X_NOT_IN_M";
pub const E_SEMANTIC: &str = "E_SEMANTIC";

#[derive(Debug, Clone)]
enum MetricSpec {
    Identity,
    Diag(Vec<f64>),
    Rows(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
enum PhiSpec {
    Riemannian,
    Randers,
    Poly(Vec<f64>),
}

#[derive(Default)]
struct Draft {
    dim: Option<usize>,
    catalog: Option<(LieAlgebra, ReductiveDecomposition)>,
    structure_line: usize,
    brackets: Vec<((usize, usize), Vector)>,
    h: Vec<Vector>,
    m: Vec<Vector>,
    h_line: usize,
    metric: Option<(MetricSpec, usize)>,
    x: Option<(Vector, usize)>,
    phi: Option<(PhiSpec, usize)>,
    b0: Option<(f64, usize)>,
    tol: Option<f64>,
}

pub fn parse_model(text: &str) -> Result<ModelBundle, Vec<Diagnostic>> {
    let mut draft = Draft::default();
    let mut diags = Vec::new();

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let chars: Vec<char> = raw_line.chars().collect();
        let end = chars.iter().position(|&c| c == '#').unwrap_or(chars.len());
        let mut start = 0usize;
        while start < end {
            let stop = chars[start..end]
                .iter()
                .position(|&c| c == ';')
                .map(|p| start + p)
                .unwrap_or(end);
            let segment: String = chars[start..stop].iter().collect();
            if !segment.trim().is_empty() {
                statement(&segment, line_no, start, &mut draft, &mut diags);
            }
            start = stop + 1;
        }
    }

    if !diags.is_empty() {
        return Err(diags);
    }
    finish(draft, diags)
}

/// One `key = value` statement. `offset` is the 0-based char position of the
/// segment within its line, for column reporting.
fn statement(
    segment: &str,
    line: usize,
    offset: usize,
    draft: &mut Draft,
    diags: &mut Vec<Diagnostic>,
) {
    let chars: Vec<char> = segment.chars().collect();
    let lead = chars.iter().take_while(|c| c.is_whitespace()).count();
    let key_col = offset + lead + 1;
    let Some(eq) = chars.iter().position(|&c| c == '=') else {
        diags.push(Diagnostic {
            code: E_SYNTAX,
            line,
            col: key_col,
            message: "expected `key = value`".to_string(),
        });
        return;
    };
    let key_text: String = chars[..eq].iter().collect();
    let value: String = chars[eq + 1..].iter().collect();
    let value_col = offset + eq + 2;
    let tokens: Vec<&str> = key_text.split_whitespace().collect();

    let mut diag = |code: &'static str, col: usize, message: String| {
        diags.push(Diagnostic { code, line, col, message });
    };

    // Expression statements need the ambient dimension first.
    let need_dim = |draft: &Draft, diag: &mut dyn FnMut(&'static str, usize, String)| {
        match draft.dim {
            Some(d) => Some(d),
            None => {
                diag(
                    E_MISSING,
                    key_col,
                    "dim or algebra must come before this line".to_string(),
                );
                None
            }
        }
    };

    match tokens.as_slice() {
        ["algebra"] => {
            if draft.catalog.is_some() {
                return diag(E_DUP, key_col, "algebra given twice".to_string());
            }
            if draft.dim.is_some() || !draft.brackets.is_empty() {
                return diag(
                    E_DUP,
                    key_col,
                    "algebra shorthand conflicts with explicit dim/bracket lines".to_string(),
                );
            }
            match catalog(value.trim()) {
                Ok((alg, dec)) => {
                    draft.dim = Some(alg.dim());
                    draft.catalog = Some((alg, dec));
                    draft.structure_line = line;
                }
                Err(e) => diag(E_SEMANTIC, value_col, e.to_string()),
            }
        }
        ["dim"] => {
            if draft.dim.is_some() {
                return diag(E_DUP, key_col, "dim given twice".to_string());
            }
            match value.trim().parse::<usize>() {
                Ok(d) if d > 0 => draft.dim = Some(d),
                _ => diag(
                    E_NUMBER,
                    value_col,
                    format!("`{}` is not a positive integer", value.trim()),
                ),
            }
        }
        ["bracket", l1, l2] => {
            if draft.catalog.is_some() {
                return diag(
                    E_DUP,
                    key_col,
                    "bracket lines conflict with the algebra shorthand".to_string(),
                );
            }
            let Some(dim) = need_dim(draft, &mut diag) else { return };
            if draft.structure_line == 0 {
                draft.structure_line = line;
            }
            let Some(i) = basis_index(l1, dim) else {
                return diag(E_INDEX, key_col, format!("`{l1}` is not a basis label in 1..={dim}"));
            };
            let Some(j) = basis_index(l2, dim) else {
                return diag(E_INDEX, key_col, format!("`{l2}` is not a basis label in 1..={dim}"));
            };
            if i == j {
                return diag(
                    E_INDEX,
                    key_col,
                    "a bracket of a basis vector with itself is zero; drop the line".to_string(),
                );
            }
            let rhs = match expr::parse_vector(&value, dim) {
                Ok(v) => v,
                Err(e) => return diag(E_EXPR, value_col + e.col - 1, e.message),
            };
            // Store with i < j; [ej, ei] = -[ei, ej].
            let (pair, rhs) = if i < j { ((i, j), rhs) } else { ((j, i), rhs.scale(-1.0)) };
            if draft.brackets.iter().any(|(p, _)| *p == pair) {
                return diag(
                    E_DUP,
                    key_col,
                    format!("bracket e{} e{} given twice", pair.0 + 1, pair.1 + 1),
                );
            }
            draft.brackets.push((pair, rhs));
        }
        ["h"] | ["m"] => {
            if draft.catalog.is_some() {
                return diag(
                    E_DUP,
                    key_col,
                    "h/m lines conflict with the algebra shorthand".to_string(),
                );
            }
            let Some(dim) = need_dim(draft, &mut diag) else { return };
            match expr::parse_vector(&value, dim) {
                Ok(v) => {
                    if tokens[0] == "h" {
                        if draft.h_line == 0 {
                            draft.h_line = line;
                        }
                        draft.h.push(v);
                    } else {
                        draft.m.push(v);
                    }
                }
                Err(e) => diag(E_EXPR, value_col + e.col - 1, e.message),
            }
        }
        ["metric"] => {
            let spec = value.trim();
            let parsed = if spec == "identity" {
                Some(MetricSpec::Identity)
            } else if let Some(rest) = spec.strip_prefix("diag:") {
                match parse_floats(rest) {
                    Ok(d) => Some(MetricSpec::Diag(d)),
                    Err(msg) => {
                        diag(E_NUMBER, value_col, msg);
                        None
                    }
                }
            } else {
                diag(
                    E_SYNTAX,
                    value_col,
                    format!("`{spec}` is not `identity` or `diag: ...` (rows go on `metric row =` lines)"),
                );
                None
            };
            if let Some(spec) = parsed {
                if draft.metric.is_some() {
                    return diag(E_DUP, key_col, "metric given twice".to_string());
                }
                draft.metric = Some((spec, line));
            }
        }
        ["metric", "row"] => match parse_floats(&value) {
            Ok(row) => match &mut draft.metric {
                None => draft.metric = Some((MetricSpec::Rows(vec![row]), line)),
                Some((MetricSpec::Rows(rows), _)) => rows.push(row),
                Some(_) => diag(
                    E_DUP,
                    key_col,
                    "metric row lines conflict with an earlier metric statement".to_string(),
                ),
            },
            Err(msg) => diag(E_NUMBER, value_col, msg),
        },
        ["x"] => {
            if draft.x.is_some() {
                return diag(E_DUP, key_col, "x given twice".to_string());
            }
            let Some(dim) = need_dim(draft, &mut diag) else { return };
            match expr::parse_vector(&value, dim) {
                Ok(v) => draft.x = Some((v, line)),
                Err(e) => diag(E_EXPR, value_col + e.col - 1, e.message),
            }
        }
        ["phi"] => {
            if draft.phi.is_some() {
                return diag(E_DUP, key_col, "phi given twice".to_string());
            }
            let spec = value.trim();
            if spec == "riemannian" {
                draft.phi = Some((PhiSpec::Riemannian, line));
            } else if spec == "randers" {
                draft.phi = Some((PhiSpec::Randers, line));
            } else if let Some(rest) = spec.strip_prefix("poly:") {
                match parse_floats(rest) {
                    Ok(coeffs) => draft.phi = Some((PhiSpec::Poly(coeffs), line)),
                    Err(msg) => diag(E_NUMBER, value_col, msg),
                }
            } else {
                diag(
                    E_PHI,
                    value_col,
                    format!("`{spec}` is not riemannian, randers, or poly: c0, c1, ..."),
                );
            }
        }
        ["b0"] => {
            if draft.b0.is_some() {
                return diag(E_DUP, key_col, "b0 given twice".to_string());
            }
            match value.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => draft.b0 = Some((v, line)),
                _ => diag(
                    E_NUMBER,
                    value_col,
                    format!("`{}` is not a positive number", value.trim()),
                ),
            }
        }
        ["tol"] => {
            if draft.tol.is_some() {
                return diag(E_DUP, key_col, "tol given twice".to_string());
            }
            match value.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => draft.tol = Some(v),
                _ => diag(
                    E_NUMBER,
                    value_col,
                    format!("`{}` is not a positive number", value.trim()),
                ),
            }
        }
        _ => diag(
            E_KEY,
            key_col,
            format!("unknown key `{}`", key_text.trim()),
        ),
    }
}

fn basis_index(label: &str, dim: usize) -> Option<usize> {
    let rest = label.strip_prefix('e')?;
    let idx: usize = rest.parse().ok()?;
    if idx >= 1 && idx <= dim {
        Some(idx - 1)
    } else {
        None
    }
}

fn parse_floats(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let body = piece.trim();
        if body.is_empty() {
            return Err("missing number".to_string());
        }
        match body.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => return Err(format!("`{body}` is not a finite number")),
        }
    }
    Ok(out)
}

fn finish(draft: Draft, mut diags: Vec<Diagnostic>) -> Result<ModelBundle, Vec<Diagnostic>> {
    let fail = |code: &'static str, line: usize, message: String| Diagnostic {
        code,
        line,
        col: 1,
        message,
    };

    let Some(dim) = draft.dim else {
        diags.push(fail(
            E_MISSING,
            0,
            "model defines no algebra: add `dim = ...` or `algebra = ...`".to_string(),
        ));
        return Err(diags);
    };

    let (algebra, mut dec) = match draft.catalog {
        Some(pair) => pair,
        None => {
            let rules: Vec<((usize, usize), Vec<(usize, f64)>)> = draft
                .brackets
                .iter()
                .map(|((i, j), v)| {
                    let terms: Vec<(usize, f64)> = v
                        .coords()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0.0)
                        .map(|(k, c)| (k, *c))
                        .collect();
                    ((*i, *j), terms)
                })
                .collect();
            let borrowed: Vec<((usize, usize), &[(usize, f64)])> = rules
                .iter()
                .map(|(p, terms)| (*p, terms.as_slice()))
                .collect();
            let alg = match LieAlgebra::from_brackets(dim, &borrowed) {
                Ok(a) => a,
                Err(e) => {
                    diags.push(fail(E_SEMANTIC, draft.structure_line, e.to_string()));
                    return Err(diags);
                }
            };
            let jacobi = alg.check_jacobi();
            if !jacobi.pass {
                let (i, j, k) = jacobi.worst_triple;
                diags.push(fail(
                    E_JACOBI,
                    draft.structure_line,
                    format!(
                        "brackets violate the Jacobi identity at (e{}, e{}, e{}), residual {:.3e}",
                        i + 1,
                        j + 1,
                        k + 1,
                        jacobi.max_residual
                    ),
                ));
                return Err(diags);
            }
            (alg, ReductiveDecomposition::trivial(dim))
        }
    };

    if draft.h.is_empty() != draft.m.is_empty() {
        diags.push(fail(
            E_MISSING,
            draft.h_line,
            "a decomposition needs both h and m lines".to_string(),
        ));
        return Err(diags);
    }
    if !draft.h.is_empty() {
        match ReductiveDecomposition::new(&algebra, draft.h, draft.m) {
            Ok(d) => dec = d,
            Err(e) => {
                diags.push(fail(E_DECOMP, draft.h_line, e.to_string()));
                return Err(diags);
            }
        }
    }

    let domain = if dec.is_trivial() {
        IpDomain::Ambient
    } else {
        IpDomain::MRestricted
    };
    let target = if dec.is_trivial() { dim } else { dec.m_dim() };
    let (spec, metric_line) = draft
        .metric
        .unwrap_or((MetricSpec::Identity, 0));
    let a = match spec {
        MetricSpec::Identity => Ok(InnerProduct::identity(target, domain)),
        MetricSpec::Diag(entries) => {
            if entries.len() != target {
                diags.push(fail(
                    E_INDEX,
                    metric_line,
                    format!("diag has {} entries, the metric needs {target}", entries.len()),
                ));
                return Err(diags);
            }
            InnerProduct::from_diag(&entries, domain)
        }
        MetricSpec::Rows(rows) => {
            if rows.len() != target || rows.iter().any(|r| r.len() != target) {
                diags.push(fail(
                    E_INDEX,
                    metric_line,
                    format!("metric rows must form a {target}x{target} matrix"),
                ));
                return Err(diags);
            }
            InnerProduct::from_rows(&rows, domain)
        }
    };
    let a = match a {
        Ok(a) => a,
        Err(e) => {
            diags.push(fail(E_SPD, metric_line, e.to_string()));
            return Err(diags);
        }
    };

    let (x, x_line) = draft.x.unwrap_or((Vector::zero(dim), 0));

    let (phi_spec, phi_line) = draft.phi.unwrap_or((PhiSpec::Riemannian, 0));
    if let Some((_, b0_line)) = draft.b0 {
        if !matches!(phi_spec, PhiSpec::Poly(_)) {
            diags.push(fail(
                E_KEY,
                b0_line,
                "b0 only applies to poly profiles".to_string(),
            ));
            return Err(diags);
        }
    }
    let phi = match phi_spec {
        PhiSpec::Riemannian => PhiFunction::riemannian(),
        PhiSpec::Randers => PhiFunction::randers(),
        PhiSpec::Poly(coeffs) => {
            let b0 = draft.b0.map(|(v, _)| v).unwrap_or(1.0);
            match PhiFunction::polynomial(coeffs, b0) {
                Ok(p) => p,
                Err(e) => {
                    diags.push(fail(E_PHI, phi_line, e.to_string()));
                    return Err(diags);
                }
            }
        }
    };

    let bundle = ModelBundle {
        algebra,
        dec,
        a,
        x,
        phi,
        tol: draft.tol.unwrap_or(DEFAULT_MODEL_TOL),
    };
    if let Err(e) = bundle.build_metric() {
        let (code, line) = match &e {
            CoreError::NormExceedsB0 { .. } => (E_NORM_BOUND, x_line),
            CoreError::PhiConditionFailed { .. } => (E_PHI_CONDITION, phi_line),
            CoreError::NotInSubspace { .. } => (E_X_NOT_IN_M, x_line),
            CoreError::NotSymmetric { .. } | CoreError::NotPositiveDefinite => {
                (E_SPD, metric_line)
            }
            CoreError::PhiNotPositive { .. }
            | CoreError::InvalidB0 { .. }
            | CoreError::DerivativeMismatch { .. } => (E_PHI, phi_line),
            _ => (E_SEMANTIC, 0),
        };
        diags.push(fail(code, line, e.to_string()));
        return Err(diags);
    }
    Ok(bundle)
}

/// Canonical text for a bundle. Parsing the output reproduces an equal
/// bundle; the text itself is normalized, not a copy of the input.
pub fn serialize(bundle: &ModelBundle) -> String {
    let dim = bundle.algebra.dim();
    let mut out = format!("dim = {dim}\n");
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = bundle.algebra.bracket_basis(i, j);
            if v.coords().iter().any(|c| *c != 0.0) {
                out.push_str(&format!(
                    "bracket e{} e{} = {}\n",
                    i + 1,
                    j + 1,
                    combo_text(&v)
                ));
            }
        }
    }
    if !bundle.dec.is_trivial() {
        for h in bundle.dec.h_basis() {
            out.push_str(&format!("h = {}\n", vector_text(h)));
        }
        for m in bundle.dec.m_basis() {
            out.push_str(&format!("m = {}\n", vector_text(m)));
        }
    }
    out.push_str(&metric_text(&bundle.a));
    if bundle.x.coords().iter().any(|c| *c != 0.0) {
        out.push_str(&format!("x = {}\n", csv(bundle.x.coords())));
    }
    let phi_name = bundle.phi.kind_name();
    if let Some(coeffs) = bundle.phi.coefficients() {
        out.push_str(&format!("phi = poly: {}\n", csv(coeffs)));
        out.push_str(&format!("b0 = {}\n", bundle.phi.b0()));
    } else if phi_name == "riemannian" || phi_name == "randers" {
        out.push_str(&format!("phi = {phi_name}\n"));
    } else {
        panic!("custom phi profiles have no file syntax");
    }
    out.push_str(&format!("tol = {}\n", bundle.tol));
    out
}

fn csv(coords: &[f64]) -> String {
    coords
        .iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `e3`, `-e2`, `0.5*e1 + e4`, ...
fn combo_text(v: &Vector) -> String {
    let mut out = String::new();
    for (k, &c) in v.coords().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        if mag == 1.0 {
            out.push_str(&format!("e{}", k + 1));
        } else {
            out.push_str(&format!("{mag}*e{}", k + 1));
        }
    }
    out
}

fn vector_text(v: &Vector) -> String {
    let nonzero: Vec<usize> = v
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, _)| k)
        .collect();
    if nonzero.len() == 1 && v.get(nonzero[0]) == 1.0 {
        format!("e{}", nonzero[0] + 1)
    } else {
        csv(v.coords())
    }
}

fn metric_text(a: &InnerProduct) -> String {
    let m = a.matrix();
    let n = m.nrows();
    let identity = (0..n).all(|i| (0..n).all(|j| m[(i, j)] == if i == j { 1.0 } else { 0.0 }));
    if identity {
        return "metric = identity\n".to_string();
    }
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0));
    if diagonal {
        let entries: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
        return format!("metric = diag: {}\n", csv(&entries));
    }
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| m[(i, j)]).collect();
        out.push_str(&format!("metric row = {}\n", csv(&row)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(result: Result<ModelBundle, Vec<Diagnostic>>) -> Vec<&'static str> {
        result.unwrap_err().iter().map(|d| d.code).collect()
    }

    #[test]
    fn minimal_explicit_model() {
        let text = "dim = 3\nbracket e1 e2 = e3\nphi = randers\nx = 0.5*e3\n";
        let bundle = parse_model(text).unwrap();
        assert_eq!(bundle.algebra.dim(), 3);
        assert!(bundle.dec.is_trivial());
        assert_eq!(bundle.x.coords(), &[0.0, 0.0, 0.5]);
        assert_eq!(bundle.tol, DEFAULT_MODEL_TOL);
        assert_eq!(
            bundle.algebra.bracket_basis(0, 1).coords(),
            &[0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn catalog_shorthand_with_overridden_metric() {
        let text = "algebra = so3r_so2\nmetric = diag: 1, 1, 2\nx = 0.3*e4\nphi = randers\n";
        let bundle = parse_model(text).unwrap();
        assert_eq!(bundle.dec.m_dim(), 3);
        assert_eq!(bundle.a.dim(), 3);
        assert_eq!(bundle.a.matrix()[(2, 2)], 2.0);
        bundle.build_metric().unwrap();
    }

    #[test]
    fn swapped_bracket_order_negates() {
        let a = parse_model("dim = 3\nbracket e1 e2 = e3\n").unwrap();
        let b = parse_model("dim = 3\nbracket e2 e1 = -e3\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn statements_share_lines_and_comments_drop() {
        let text = "dim = 3; bracket e1 e2 = e3 # heisenberg\nphi = riemannian\n";
        parse_model(text).unwrap();
    }

    #[test]
    fn diagnostics_carry_codes_and_positions() {
        assert_eq!(codes(parse_model("dim = 3\ndim = 4\n")), vec![E_DUP]);
        assert_eq!(codes(parse_model("dim = 0\n")), vec![E_NUMBER]);
        assert_eq!(codes(parse_model("bracket e1 e2 = e3\n")), vec![E_MISSING]);
        assert_eq!(codes(parse_model("")), vec![E_MISSING]);
        assert_eq!(codes(parse_model("dim = 3\nspam = 1\n")), vec![E_KEY]);
        assert_eq!(codes(parse_model("dim = 3\nx = e9\n")), vec![E_EXPR]);
        let err = parse_model("dim = 3\nx = e1 + e9\n").unwrap_err();
        assert_eq!(err[0].line, 2);
        assert_eq!(err[0].col, 10); // the e9, offset past "x = "
    }

    #[test]
    fn jacobi_violations_are_reported() {
        // [e2, [e3, e1]] + cyclic = e3 here, not zero.
        let text = "dim = 3\nbracket e1 e2 = e3\nbracket e1 e3 = e1\n";
        assert_eq!(codes(parse_model(text)), vec![E_JACOBI]);
    }

    #[test]
    fn semantic_codes_from_the_builder() {
        let base = "algebra = su2\nphi = randers\n";
        assert_eq!(
            codes(parse_model(&format!("{base}x = 0, 0, 1.5\n"))),
            vec![E_NORM_BOUND]
        );
        assert_eq!(
            codes(parse_model("algebra = su2\nmetric = diag: 1, -1, 1\n")),
            vec![E_SPD]
        );
        assert_eq!(
            codes(parse_model(
                "algebra = su2\nphi = poly: 1, 0, -2\nb0 = 0.7\nx = 0.6, 0, 0\n"
            )),
            vec![E_PHI_CONDITION]
        );
        assert_eq!(
            codes(parse_model("algebra = so3_so2\nx = 0, 0, 0.5\n")),
            vec![E_X_NOT_IN_M]
        );
        assert_eq!(
            codes(parse_model("algebra = su2\nb0 = 2\n")),
            vec![E_KEY]
        );
    }

    #[test]
    fn decomposition_failures_get_their_own_code() {
        // h = e1 is not a subalgebra complement: [e1, m] leaves m for this m.
        let text = "dim = 3\nbracket e1 e2 = e3\nbracket e2 e3 = e1\nbracket e1 e3 = -e2\n\
                    h = e1\nm = e2\n";
        let codes_found = codes(parse_model(text));
        assert!(codes_found.contains(&E_DECOMP) || codes_found.contains(&E_MISSING));
    }

    #[test]
    fn round_trip_is_bundle_equality() {
        let texts = [
            "algebra = su2\nphi = randers\nx = 0.3*e1\n",
            "algebra = so3r_so2\nmetric = diag: 1, 1, 2\nx = 0.3*e4\nphi = randers\n",
            "dim = 3\nbracket e1 e2 = e3\nphi = poly: 1, 1, 0.1\nb0 = 1\ntol = 1e-9\n",
            "dim = 2\nmetric row = 2, 0.5\nmetric row = 0.5, 1\n",
        ];
        for text in texts {
            let bundle = parse_model(text).unwrap();
            let text2 = serialize(&bundle);
            let bundle2 = parse_model(&text2).expect(&text2);
            assert_eq!(bundle, bundle2, "round trip changed the bundle:\n{text2}");
            assert_eq!(text2, serialize(&bundle2));
        }
    }

    #[test]
    fn serialize_uses_the_compact_forms() {
        let text = "algebra = so3_so2\nphi = riemannian\n";
        let out = serialize(&parse_model(text).unwrap());
        assert!(out.contains("h = e3\n"), "{out}");
        assert!(out.contains("m = e1\n"), "{out}");
        assert!(out.contains("metric = identity\n"), "{out}");
        assert!(out.contains("bracket e1 e3 = -e2\n"), "{out}");
        assert!(!out.contains("x ="), "{out}");
    }
}
