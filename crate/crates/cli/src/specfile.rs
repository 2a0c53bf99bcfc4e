//! JSON spec files and `builtin:<name>` references.
//!
//! Schema: `{"name", "dim", "gram": [[q]], "generators": [{"matrix": [[int]], "a": [q]}]}`
//! where each `q` is an integer or a `"p/q"` string and `a` is the shift of
//! `γ ∘ L_a` in lattice coordinates.

use std::path::Path;

use flatorb_core::linalg::{parse_rational, IntMatrix, RatMatrix, Rational};
use flatorb_core::orbifold::{Catalog, FlatOrbifoldSpec, RawGenerator};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const BUILTIN_PREFIX: &str = "builtin:";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    fn as_text(&self) -> String {
        match self {
            RationalText::Int(n) => n.to_string(),
            RationalText::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub matrix: Vec<Vec<i64>>,
    pub a: Vec<RationalText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub dim: usize,
    pub gram: Vec<Vec<RationalText>>,
    pub generators: Vec<GeneratorFile>,
}

/// 1-based line and column of the first occurrence of `needle`, or of the start.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let offset = text.find(needle).unwrap_or(0);
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn context_line(text: &str, line: usize) -> String {
    text.lines().nth(line.saturating_sub(1)).unwrap_or("").trim_end().to_string()
}

fn located(origin: &str, text: &str, line: usize, column: usize, message: String) -> CliError {
    CliError::Parse { origin: origin.into(), line, column, message, context: context_line(text, line) }
}

fn near(origin: &str, text: &str, needle: &str, message: String) -> CliError {
    let (line, column) = locate(text, needle);
    located(origin, text, line, column, message)
}

fn rational(origin: &str, text: &str, q: &RationalText) -> CliResult<Rational> {
    let s = q.as_text();
    parse_rational(&s).map_err(|e| near(origin, text, &format!("\"{s}\""), e.to_string()))
}

fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let slices: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&slices)
}

/// Parses and validates a spec file; `origin` labels error messages.
pub fn parse_spec(text: &str, origin: &str) -> CliResult<FlatOrbifoldSpec> {
    let raw: SpecFile = serde_json::from_str(text)
        .map_err(|e| located(origin, text, e.line(), e.column(), e.to_string()))?;
    let d = raw.dim;
    if d == 0 {
        return Err(near(origin, text, "\"dim\"", "dim must be positive".into()));
    }
    if raw.gram.len() != d || raw.gram.iter().any(|r| r.len() != d) {
        return Err(near(origin, text, "\"gram\"", format!("gram must be {d}x{d}")));
    }
    let gram_rows = raw
        .gram
        .iter()
        .map(|r| r.iter().map(|q| rational(origin, text, q)).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<Vec<_>>>()?;
    let gram = RatMatrix::from_rows(gram_rows)?;
    let mut generators = Vec::with_capacity(raw.generators.len());
    for (i, g) in raw.generators.iter().enumerate() {
        if g.matrix.len() != d || g.matrix.iter().any(|r| r.len() != d) || g.a.len() != d {
            return Err(near(origin, text, "\"generators\"", format!("generator {i}: matrix must be {d}x{d} and a of length {d}")));
        }
        let a = g.a.iter().map(|q| rational(origin, text, q)).collect::<CliResult<Vec<_>>>()?;
        generators.push(RawGenerator { matrix: int_matrix(&g.matrix), a });
    }
    FlatOrbifoldSpec::validate(raw.name, gram, generators)
        .map_err(|e| near(origin, text, "\"generators\"", e.to_string()))
}

pub fn load_spec(path: &Path) -> CliResult<FlatOrbifoldSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_spec(&text, &path.display().to_string())
}

/// `builtin:<name>` goes through the catalog, anything else is a file path.
pub fn resolve(reference: &str, catalog: &dyn Catalog) -> CliResult<FlatOrbifoldSpec> {
    match reference.strip_prefix(BUILTIN_PREFIX) {
        Some(name) => Ok(catalog.lookup(name)?),
        None => load_spec(Path::new(reference)),
    }
}

/// Normalized file form: every rational written as a reduced string.
pub fn to_spec_file(spec: &FlatOrbifoldSpec) -> SpecFile {
    let d = spec.dim();
    let gram = spec.gram();
    let text = |q: &Rational| RationalText::Text(q.to_string());
    let rows = |m: &IntMatrix| -> Vec<Vec<i64>> {
        let m = m.to_i64().expect("generator entries fit in i64");
        (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
    };
    SpecFile {
        name: spec.name().into(),
        dim: d,
        gram: (0..d).map(|i| (0..d).map(|j| text(&gram[(i, j)])).collect()).collect(),
        generators: spec
            .generators()
            .iter()
            .map(|g| GeneratorFile { matrix: rows(&g.matrix), a: g.a.iter().map(text).collect() })
            .collect(),
    }
}

pub fn emit_spec(spec: &FlatOrbifoldSpec) -> String {
    let mut s = serde_json::to_string_pretty(&to_spec_file(spec)).expect("spec file serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use flatorb_core::orbifold::BuiltinCatalog;

    #[test]
    fn integers_and_strings_both_parse() {
        let text = r#"{"name": "k", "dim": 2, "gram": [[1, "0"], ["0/3", 1]],
            "generators": [{"matrix": [[-1, 0], [0, 1]], "a": [0, "2/4"]}]}"#;
        let spec = parse_spec(text, "inline").unwrap();
        assert_eq!(spec, BuiltinCatalog.lookup("klein_bottle").unwrap().with_name("k"));
    }

    #[test]
    fn bad_rational_reports_its_line() {
        let text = "{\n \"name\": \"x\",\n \"dim\": 1,\n \"gram\": [[\"1/0\"]],\n \"generators\": []\n}";
        match parse_spec(text, "f.json") {
            Err(CliError::Parse { line, context, .. }) => {
                assert_eq!(line, 4);
                assert!(context.contains("1/0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_serde_position() {
        let text = "{\n \"name\": \"x\",\n \"dim\": 1,,\n}";
        let err = parse_spec(text, "f.json").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn non_orthogonal_generator_is_rejected() {
        let text = r#"{"name": "bad", "dim": 2, "gram": [[1, "1/2"], ["1/2", 1]],
            "generators": [{"matrix": [[0, -1], [1, 0]], "a": [0, 0]}]}"#;
        let err = parse_spec(text, "f.json").unwrap_err();
        assert!(err.to_string().contains("not orthogonal"), "{err}");
    }

    #[test]
    fn builtin_prefix() {
        let spec = resolve("builtin:O(4,2)", &BuiltinCatalog).unwrap();
        assert_eq!(spec.dim(), 4);
        assert!(resolve("builtin:nope", &BuiltinCatalog).is_err());
    }

    #[test]
    fn catalog_round_trips() {
        for name in BuiltinCatalog.names() {
            let spec = BuiltinCatalog.lookup(&name).unwrap();
            let text = emit_spec(&spec);
            let back = parse_spec(&text, &name).unwrap();
            assert_eq!(back, spec, "{name}");
            assert_eq!(emit_spec(&back), text, "{name}");
        }
    }

    #[test]
    fn files_resolve_by_path() {
        let spec = BuiltinCatalog.lookup("sphere_244").unwrap();
        let path = std::env::temp_dir().join(format!("flatorb-spec-{}.json", std::process::id()));
        std::fs::write(&path, emit_spec(&spec)).unwrap();
        let loaded = resolve(path.to_str().unwrap(), &BuiltinCatalog);
        std::fs::remove_file(&path).unwrap();
        assert_eq!(loaded.unwrap(), spec);
        assert!(matches!(resolve("/nonexistent/spec.json", &BuiltinCatalog), Err(CliError::Io { .. })));
    }
}
