//! Variable declarations, method dictionaries, and plan compilation.
//!
//! User-facing declarations (variable types, method overrides, a predictor
//! matrix, the analysis formula) compile against an ingested table into a
//! [`VariablePlan`]: the ordered variable specs, the binary predictor matrix,
//! and the impute order driving the chained loop.

use thiserror::Error;

use crate::chunkstore::{ChunkStoreError, ChunkedTable, ColumnKind};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("variable '{variable}': unknown type name '{type_name}'")]
    UnknownTypeName { variable: String, type_name: String },
    #[error("declaration error: {0}")]
    Declaration(String),
    #[error("plan error: {0}")]
    Plan(String),
    #[error("formula parse error at byte {offset}: {detail}")]
    FormulaParse { offset: usize, detail: String },
    #[error(transparent)]
    ChunkStore(#[from] ChunkStoreError),
}

/// Declared variable type. Guides storage kind, initialization, and the
/// default conditional model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarType {
    ContinuousFloat,
    ContinuousInt,
    Binary,
    Nominal,
    Ordinal,
    Code,
    String,
    DateTime,
}

impl VarType {
    pub fn parse(name: &str) -> Option<VarType> {
        match name {
            "Continuous_float" => Some(VarType::ContinuousFloat),
            "Continuous_int" => Some(VarType::ContinuousInt),
            "Binary" => Some(VarType::Binary),
            "Nominal" => Some(VarType::Nominal),
            "Ordinal" => Some(VarType::Ordinal),
            "Code" => Some(VarType::Code),
            "String" => Some(VarType::String),
            "DateTime" => Some(VarType::DateTime),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VarType::ContinuousFloat => "Continuous_float",
            VarType::ContinuousInt => "Continuous_int",
            VarType::Binary => "Binary",
            VarType::Nominal => "Nominal",
            VarType::Ordinal => "Ordinal",
            VarType::Code => "Code",
            VarType::String => "String",
            VarType::DateTime => "DateTime",
        }
    }

    /// Physical storage for this variable type.
    pub fn storage_kind(self) -> ColumnKind {
        match self {
            VarType::ContinuousFloat => ColumnKind::Float64,
            VarType::ContinuousInt | VarType::Code => ColumnKind::Int64,
            VarType::Binary | VarType::Nominal | VarType::Ordinal => ColumnKind::CategoryCode,
            VarType::String | VarType::DateTime => ColumnKind::CategoryCode,
        }
    }

    /// Code, String and DateTime columns ride along unimputed and are
    /// excluded from predictor sets.
    pub fn is_imputable(self) -> bool {
        !matches!(self, VarType::Code | VarType::String | VarType::DateTime)
    }

    pub fn is_categorical(self) -> bool {
        matches!(self, VarType::Binary | VarType::Nominal | VarType::Ordinal)
    }
}

/// Conditional model used to impute a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImputeMethod {
    Linear,
    Logistic,
    Multinomial,
    RfRegressor,
    RfClassifier,
    None,
}

impl ImputeMethod {
    pub fn parse(name: &str) -> Option<ImputeMethod> {
        match name {
            "linear" => Some(ImputeMethod::Linear),
            "logistic" => Some(ImputeMethod::Logistic),
            "multinomial" => Some(ImputeMethod::Multinomial),
            "rf_regressor" => Some(ImputeMethod::RfRegressor),
            "rf_classifier" => Some(ImputeMethod::RfClassifier),
            "none" => Some(ImputeMethod::None),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ImputeMethod::Linear => "linear",
            ImputeMethod::Logistic => "logistic",
            ImputeMethod::Multinomial => "multinomial",
            ImputeMethod::RfRegressor => "rf_regressor",
            ImputeMethod::RfClassifier => "rf_classifier",
            ImputeMethod::None => "none",
        }
    }
}

/// Initial fill applied before the chained loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMethod {
    Mean,
    Median,
    Mode,
    RandomSample,
    None,
}

/// Default conditional model per variable type: linear for continuous,
/// logistic for binary, multinomial for nominal, random-forest classifier
/// for ordinal.
pub fn default_method_for(var_type: VarType) -> Result<ImputeMethod, SchemaError> {
    match var_type {
        VarType::ContinuousFloat | VarType::ContinuousInt => Ok(ImputeMethod::Linear),
        VarType::Binary => Ok(ImputeMethod::Logistic),
        VarType::Nominal => Ok(ImputeMethod::Multinomial),
        VarType::Ordinal => Ok(ImputeMethod::RfClassifier),
        other => Err(SchemaError::Declaration(format!(
            "type {} is not imputable",
            other.as_str()
        ))),
    }
}

/// Summary-statistic initialization per variable type: mode for categorical
/// types, median for integers, mean for floats, none for rider types.
pub fn default_init_for(var_type: VarType) -> InitMethod {
    match var_type {
        VarType::Binary | VarType::Nominal | VarType::Ordinal => InitMethod::Mode,
        VarType::ContinuousInt => InitMethod::Median,
        VarType::ContinuousFloat => InitMethod::Mean,
        VarType::Code | VarType::String | VarType::DateTime => InitMethod::None,
    }
}

/// One variable's compiled spec.
#[derive(Clone, Debug)]
pub struct VariableSpec {
    pub name: String,
    pub var_type: VarType,
    pub method: ImputeMethod,
    pub init_method: InitMethod,
}

/// Turn a `name -> type` declaration list into specs with default methods and
/// summary-statistic initialization assigned.
pub fn parse_variable_types(decl: &[(String, VarType)]) -> Vec<VariableSpec> {
    decl.iter()
        .map(|(name, var_type)| VariableSpec {
            name: name.clone(),
            var_type: *var_type,
            method: if var_type.is_imputable() {
                default_method_for(*var_type).expect("imputable type has a default")
            } else {
                ImputeMethod::None
            },
            init_method: default_init_for(*var_type),
        })
        .collect()
}

/// Parse a variable-type declaration file: one `name=Type` per line, blank
/// lines ignored.
pub fn parse_type_declarations(text: &str) -> Result<Vec<(String, VarType)>, SchemaError> {
    let mut decls = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((name, type_name)) = line.split_once('=') else {
            return Err(SchemaError::Declaration(format!(
                "expected 'name=Type', got '{line}'"
            )));
        };
        let name = name.trim();
        let type_name = type_name.trim();
        let var_type = VarType::parse(type_name).ok_or_else(|| SchemaError::UnknownTypeName {
            variable: name.to_string(),
            type_name: type_name.to_string(),
        })?;
        decls.push((name.to_string(), var_type));
    }
    if decls.is_empty() {
        return Err(SchemaError::Declaration(
            "no variables declared".to_string(),
        ));
    }
    Ok(decls)
}

/// p x p binary matrix; row j lists the predictors of variable j.
pub type PredictorMatrix = Vec<Vec<bool>>;

/// Default is all-others (all ones minus the identity); overrides are
/// validated (square, zero diagonal) and used verbatim.
pub fn build_predictor_matrix(
    p: usize,
    overrides: Option<&PredictorMatrix>,
) -> Result<PredictorMatrix, SchemaError> {
    match overrides {
        None => Ok((0..p).map(|j| (0..p).map(|k| k != j).collect()).collect()),
        Some(m) => {
            if m.len() != p || m.iter().any(|row| row.len() != p) {
                return Err(SchemaError::Plan(format!(
                    "predictor matrix must be {p}x{p}"
                )));
            }
            for (j, row) in m.iter().enumerate() {
                if row[j] {
                    return Err(SchemaError::Plan(format!(
                        "predictor matrix diagonal must be zero (row {j})"
                    )));
                }
            }
            Ok(m.clone())
        }
    }
}

/// Parsed analysis formula: `response ~ term + term + ...`, intercept always
/// implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub response: String,
    pub terms: Vec<String>,
}

impl Formula {
    pub fn format(&self) -> String {
        format!("{} ~ {}", self.response, self.terms.join(" + "))
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

struct FormulaLexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> FormulaLexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Result<&'a str, SchemaError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(SchemaError::FormulaParse {
                offset: start,
                detail: "expected an identifier".to_string(),
            });
        }
        Ok(&self.text[start..self.pos])
    }

    fn expect(&mut self, c: char) -> Result<(), SchemaError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(SchemaError::FormulaParse {
                offset: self.pos,
                detail: format!("expected '{c}'"),
            })
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

/// Parse `response ~ term (+ term)*`. Duplicated terms and a response reused
/// as a term are rejected; errors carry the byte offset.
pub fn parse_formula(text: &str) -> Result<Formula, SchemaError> {
    let mut lex = FormulaLexer { text, pos: 0 };
    let response = lex.ident()?.to_string();
    lex.expect('~')?;
    let mut terms: Vec<String> = Vec::new();
    loop {
        lex.skip_ws();
        let offset = lex.pos;
        let term = lex.ident()?.to_string();
        if term == response {
            return Err(SchemaError::FormulaParse {
                offset,
                detail: format!("response '{response}' repeated as a term"),
            });
        }
        if terms.contains(&term) {
            return Err(SchemaError::FormulaParse {
                offset,
                detail: format!("duplicate term '{term}'"),
            });
        }
        terms.push(term);
        if lex.at_end() {
            break;
        }
        lex.expect('+')?;
    }
    Ok(Formula { response, terms })
}

/// Order in which incomplete variables are visited each iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ImputeOrderPolicy {
    /// Schema column order (the convention of the reference implementation).
    #[default]
    SchemaOrder,
    /// Fewest missing cells first.
    AscendingMissingness,
}

/// Plan compilation knobs.
#[derive(Clone, Debug)]
pub struct PlanOptions {
    pub method_overrides: Vec<(String, ImputeMethod)>,
    pub predictor_overrides: Option<PredictorMatrix>,
    /// Initialize by sampling observed values (the default) instead of
    /// summary statistics.
    pub random_sample_init: bool,
    pub impute_order: ImputeOrderPolicy,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            method_overrides: Vec::new(),
            predictor_overrides: None,
            random_sample_init: true,
            impute_order: ImputeOrderPolicy::SchemaOrder,
        }
    }
}

/// Compiled imputation plan. Immutable after compilation.
#[derive(Clone, Debug)]
pub struct VariablePlan {
    pub specs: Vec<VariableSpec>,
    pub predictor_matrix: PredictorMatrix,
    /// Indices (into `specs`/table columns) of variables with at least one
    /// masked cell and an imputation method, in visit order.
    pub impute_order: Vec<usize>,
    pub analysis_formula: Formula,
}

fn override_allowed(var_type: VarType, method: ImputeMethod) -> bool {
    use ImputeMethod::*;
    match var_type {
        VarType::ContinuousFloat | VarType::ContinuousInt => {
            matches!(method, Linear | RfRegressor)
        }
        VarType::Binary => matches!(method, Logistic | RfClassifier),
        VarType::Nominal | VarType::Ordinal => matches!(method, Multinomial | RfClassifier),
        _ => false,
    }
}

impl VariablePlan {
    /// Compile declarations against an ingested table. Declarations must
    /// cover exactly the table's columns (any order).
    pub fn compile(
        table: &ChunkedTable,
        decl: &[(String, VarType)],
        analysis_formula: Formula,
        options: &PlanOptions,
    ) -> Result<VariablePlan, SchemaError> {
        let p = table.schema().len();
        if decl.len() != p {
            return Err(SchemaError::Declaration(format!(
                "{} variables declared but table has {} columns",
                decl.len(),
                p
            )));
        }
        // Reorder declarations to table column order.
        let mut specs = Vec::with_capacity(p);
        for col in &table.schema().columns {
            let (_, var_type) = decl
                .iter()
                .find(|(name, _)| *name == col.name)
                .ok_or_else(|| {
                    SchemaError::Declaration(format!("no type declared for column '{}'", col.name))
                })?;
            if var_type.storage_kind() != col.kind {
                return Err(SchemaError::Declaration(format!(
                    "column '{}' stored as {} but declared {}",
                    col.name,
                    col.kind.as_str(),
                    var_type.as_str()
                )));
            }
            specs.push(VariableSpec {
                name: col.name.clone(),
                var_type: *var_type,
                method: if var_type.is_imputable() {
                    default_method_for(*var_type)?
                } else {
                    ImputeMethod::None
                },
                init_method: default_init_for(*var_type),
            });
        }

        for (name, method) in &options.method_overrides {
            let spec = specs
                .iter_mut()
                .find(|s| s.name == *name)
                .ok_or_else(|| SchemaError::Declaration(format!("unknown variable '{name}'")))?;
            if *method == ImputeMethod::None || !spec.var_type.is_imputable() {
                return Err(SchemaError::Declaration(format!(
                    "method override for '{name}' conflicts with type {}",
                    spec.var_type.as_str()
                )));
            }
            if !override_allowed(spec.var_type, *method) {
                return Err(SchemaError::Declaration(format!(
                    "method {} cannot impute a {} variable ('{name}')",
                    method.as_str(),
                    spec.var_type.as_str()
                )));
            }
            spec.method = *method;
        }

        if options.random_sample_init {
            for spec in &mut specs {
                if spec.init_method != InitMethod::None {
                    spec.init_method = InitMethod::RandomSample;
                }
            }
        }

        // Binary variables must have exactly two observed categories.
        for (j, spec) in specs.iter().enumerate() {
            if spec.var_type == VarType::Binary {
                let n_cat = table.schema().column(j as u32).categories.len();
                if n_cat != 2 {
                    return Err(SchemaError::Declaration(format!(
                        "binary variable '{}' has {} observed categories",
                        spec.name, n_cat
                    )));
                }
            }
        }

        let mut predictor_matrix =
            build_predictor_matrix(p, options.predictor_overrides.as_ref())?;
        for (j, spec) in specs.iter().enumerate() {
            if spec.var_type.is_imputable() {
                continue;
            }
            if options.predictor_overrides.is_some()
                && predictor_matrix.iter().any(|row| row[j])
            {
                return Err(SchemaError::Plan(format!(
                    "column '{}' ({}) cannot be a predictor",
                    spec.name,
                    spec.var_type.as_str()
                )));
            }
            for row in &mut predictor_matrix {
                row[j] = false;
            }
            predictor_matrix[j].iter_mut().for_each(|v| *v = false);
        }

        // Analysis formula binds against the schema.
        for name in std::iter::once(&analysis_formula.response).chain(&analysis_formula.terms) {
            let spec = specs.iter().find(|s| s.name == *name).ok_or_else(|| {
                SchemaError::Declaration(format!("formula references unknown variable '{name}'"))
            })?;
            if !spec.var_type.is_imputable() {
                return Err(SchemaError::Declaration(format!(
                    "formula references {} variable '{name}'",
                    spec.var_type.as_str()
                )));
            }
        }
        let response_spec = specs
            .iter()
            .find(|s| s.name == analysis_formula.response)
            .expect("checked above");
        if response_spec.var_type != VarType::Binary {
            return Err(SchemaError::Declaration(format!(
                "analysis response '{}' must be Binary, got {}",
                analysis_formula.response,
                response_spec.var_type.as_str()
            )));
        }

        // Impute order: exactly the incomplete, imputable variables.
        let mut incomplete: Vec<(usize, u64)> = Vec::new();
        for (j, spec) in specs.iter().enumerate() {
            if spec.method == ImputeMethod::None {
                continue;
            }
            let missing = table.mask_count(j as u32)?;
            if missing > 0 {
                incomplete.push((j, missing));
            }
        }
        let impute_order: Vec<usize> = match options.impute_order {
            ImputeOrderPolicy::SchemaOrder => incomplete.iter().map(|&(j, _)| j).collect(),
            ImputeOrderPolicy::AscendingMissingness => {
                let mut v = incomplete.clone();
                v.sort_by_key(|&(j, missing)| (missing, j));
                v.into_iter().map(|(j, _)| j).collect()
            }
        };

        Ok(VariablePlan {
            specs,
            predictor_matrix,
            impute_order,
            analysis_formula,
        })
    }

    /// Predictor column indices for variable `j`, in schema order.
    pub fn predictors_of(&self, j: usize) -> Vec<usize> {
        self.predictor_matrix[j]
            .iter()
            .enumerate()
            .filter_map(|(k, &on)| on.then_some(k))
            .collect()
    }
}

/// Parse a predictor-matrix override CSV: header row of variable names, one
/// row per variable with its name in the first cell and 0/1 entries.
pub fn parse_predictor_matrix_csv(
    text: &str,
    variable_names: &[String],
) -> Result<PredictorMatrix, SchemaError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| SchemaError::Plan(format!("predictor matrix: {e}")))?
        .clone();
    let p = variable_names.len();
    if headers.len() != p + 1 {
        return Err(SchemaError::Plan(format!(
            "predictor matrix header must have {} columns (index + variables)",
            p + 1
        )));
    }
    let col_of: Vec<usize> = headers
        .iter()
        .skip(1)
        .map(|h| {
            variable_names
                .iter()
                .position(|n| n == h)
                .ok_or_else(|| SchemaError::Plan(format!("unknown variable '{h}' in header")))
        })
        .collect::<Result<_, _>>()?;
    let mut matrix = vec![vec![false; p]; p];
    let mut seen = vec![false; p];
    for record in reader.records() {
        let record = record.map_err(|e| SchemaError::Plan(format!("predictor matrix: {e}")))?;
        let name = record.get(0).unwrap_or("");
        let row = variable_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SchemaError::Plan(format!("unknown variable '{name}' in index")))?;
        if seen[row] {
            return Err(SchemaError::Plan(format!("duplicate row for '{name}'")));
        }
        seen[row] = true;
        for (k, cell) in record.iter().skip(1).enumerate() {
            matrix[row][col_of[k]] = match cell.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(SchemaError::Plan(format!(
                        "predictor matrix entries must be 0/1, got '{other}'"
                    )))
                }
            };
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(SchemaError::Plan(format!(
            "predictor matrix missing a row for '{}'",
            variable_names[missing]
        )));
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_dictionary_follows_type() {
        let specs = parse_variable_types(&[
            ("age".into(), VarType::ContinuousFloat),
            ("gen".into(), VarType::Nominal),
            ("tv".into(), VarType::ContinuousInt),
            ("id".into(), VarType::Code),
        ]);
        assert_eq!(specs[0].init_method, InitMethod::Mean);
        assert_eq!(specs[1].init_method, InitMethod::Mode);
        assert_eq!(specs[2].init_method, InitMethod::Median);
        assert_eq!(specs[3].init_method, InitMethod::None);
        assert_eq!(specs[3].method, ImputeMethod::None);
    }

    #[test]
    fn default_methods_follow_type() {
        assert_eq!(
            default_method_for(VarType::Binary).unwrap(),
            ImputeMethod::Logistic
        );
        assert_eq!(
            default_method_for(VarType::Ordinal).unwrap(),
            ImputeMethod::RfClassifier
        );
        assert_eq!(
            default_method_for(VarType::ContinuousFloat).unwrap(),
            ImputeMethod::Linear
        );
        assert_eq!(
            default_method_for(VarType::Nominal).unwrap(),
            ImputeMethod::Multinomial
        );
        assert!(default_method_for(VarType::String).is_err());
    }

    #[test]
    fn dictionary_totality() {
        // Every type maps to exactly one init method, and imputable types to
        // exactly one default model.
        let all = [
            VarType::ContinuousFloat,
            VarType::ContinuousInt,
            VarType::Binary,
            VarType::Nominal,
            VarType::Ordinal,
            VarType::Code,
            VarType::String,
            VarType::DateTime,
        ];
        for t in all {
            let _ = default_init_for(t);
            assert_eq!(default_method_for(t).is_ok(), t.is_imputable());
            assert_eq!(VarType::parse(t.as_str()), Some(t));
        }
    }

    #[test]
    fn predictor_matrix_default_all_others() {
        let m = build_predictor_matrix(3, None).unwrap();
        assert_eq!(
            m,
            vec![
                vec![false, true, true],
                vec![true, false, true],
                vec![true, true, false]
            ]
        );
        assert_eq!(build_predictor_matrix(1, None).unwrap(), vec![vec![false]]);
    }

    #[test]
    fn predictor_matrix_nonzero_diagonal_rejected() {
        let bad = vec![vec![true, false], vec![false, false]];
        assert!(matches!(
            build_predictor_matrix(2, Some(&bad)),
            Err(SchemaError::Plan(_))
        ));
    }

    #[test]
    fn formula_parses_paper_example() {
        let f = parse_formula("phb ~ age + gen + tv + reg").unwrap();
        assert_eq!(f.response, "phb");
        assert_eq!(f.terms, vec!["age", "gen", "tv", "reg"]);
    }

    #[test]
    fn formula_minimal_and_whitespace_insensitive() {
        let f = parse_formula("y~x").unwrap();
        assert_eq!(f.response, "y");
        assert_eq!(f.terms, vec!["x"]);
        assert_eq!(parse_formula("  y ~ x  ").unwrap(), f);
    }

    #[test]
    fn formula_rejects_duplicates_and_response_reuse() {
        assert!(matches!(
            parse_formula("y ~ x + x"),
            Err(SchemaError::FormulaParse { .. })
        ));
        let err = parse_formula("y ~ x + y").unwrap_err();
        match err {
            SchemaError::FormulaParse { offset, .. } => assert_eq!(offset, 8),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn formula_rejects_missing_tilde_and_empty_term() {
        assert!(parse_formula("y x").is_err());
        assert!(parse_formula("y ~ x +").is_err());
        assert!(parse_formula("y ~").is_err());
        assert!(parse_formula("y ~ x ? z").is_err());
    }

    #[test]
    fn formula_round_trips_through_format() {
        for text in ["y ~ x", "phb ~ age + gen + tv + reg", "a2 ~ b.c + d_e"] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&f.format()).unwrap(), f);
        }
    }

    #[test]
    fn type_declaration_file_parses() {
        let decls = parse_type_declarations("age=Continuous_float\n\ngen = Nominal\n").unwrap();
        assert_eq!(decls.len(), 2);
        assert_eq!(decls[0], ("age".to_string(), VarType::ContinuousFloat));
        assert_eq!(decls[1], ("gen".to_string(), VarType::Nominal));
        assert!(matches!(
            parse_type_declarations("age=Float"),
            Err(SchemaError::UnknownTypeName { .. })
        ));
    }

    #[test]
    fn predictor_matrix_csv_parses() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let text = ",a,b,c\na,0,1,0\nb,1,0,1\nc,0,0,0\n";
        let m = parse_predictor_matrix_csv(text, &names).unwrap();
        assert_eq!(
            m,
            vec![
                vec![false, true, false],
                vec![true, false, true],
                vec![false, false, false]
            ]
        );
    }
}
