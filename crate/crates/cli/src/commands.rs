use std::path::Path;

use hardmat::budget::Budget;
use hardmat::construct::{self, HardMatrixBundle};
use hardmat::hitting::{self, RSParams};
use hardmat::psd::{self, Side};
use hardmat::search::{self, MAX_INNER};
use hardmat::sidon::{self, binomial};
use hardmat::slc::{self, CircuitFactorization};
use hardmat::ssdim;
use hardmat::{Error, ExactMatrix, FieldDescriptor};
use serde_json::{json, Value};

use crate::io::{parse_vector, read_json, read_matrix, read_text};
use crate::{
    Base, CircuitCommand, Cli, Command, HardCommand, HittingCommand, PsdCommand, SideArg,
    SsdimCommand,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Output {
    pub stdout: String,
    /// Also written to stderr.
    pub provenance: Option<Value>,
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: if e.is_budget() { 3 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> CliError {
    CliError { code: 2, message }
}

fn provenance(operation: &str, parameters: Value) -> Value {
    json!({
        "operation": operation,
        "parameters": parameters,
        "version": VERSION,
    })
}

fn plain(v: Value) -> Output {
    Output {
        stdout: v.to_string(),
        provenance: None,
    }
}

/// `payload` with a `provenance` key added.
fn with_provenance(mut payload: Value, prov: Value) -> Output {
    payload
        .as_object_mut()
        .expect("object payload")
        .insert("provenance".into(), prov.clone());
    Output {
        stdout: payload.to_string(),
        provenance: Some(prov),
    }
}

fn bundle_output(op: &str, b: &HardMatrixBundle) -> Output {
    let mut payload = json!({
        "construction": b.provenance(),
        "matrix": b.matrix.to_json(),
    });
    if let Some(modulus) = &b.modulus {
        payload["modulus"] = json!(modulus);
    }
    with_provenance(payload, provenance(op, b.parameters()))
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut budget = Budget::from_env().map_err(usage)?;
    if let Some(b) = cli.budget {
        budget.enumeration = b;
    }
    match &cli.command {
        Command::Sidon { n, t, check } => run_sidon(*n, *t, check.as_deref(), &budget),
        Command::Hard(cmd) => run_hard(cmd, &budget),
        Command::Ssdim(cmd) => run_ssdim(cmd, &budget),
        Command::Hitting(cmd) => run_hitting(cmd, &budget),
        Command::Psd(cmd) => run_psd(cmd, &budget),
        Command::Circuit(cmd) => run_circuit(cmd),
        Command::Search {
            input,
            m_max,
            s_max,
            nodes,
        } => run_search(input.input.as_deref(), *m_max, *s_max, *nodes, &budget),
    }
}

fn run_sidon(
    n: Option<usize>,
    t: usize,
    check: Option<&Path>,
    budget: &Budget,
) -> Result<Output, CliError> {
    if let Some(path) = check {
        let v = read_json(Some(path))?;
        let elements: Vec<u64> = v
            .get("grid")
            .and_then(Value::as_array)
            .map(|rows| {
                rows.iter()
                    .flat_map(|r| r.as_array().cloned().unwrap_or_default())
                    .map(|x| x.as_u64())
                    .collect::<Option<Vec<u64>>>()
            })
            .flatten()
            .ok_or_else(|| {
                Error::InvalidArgument("expected a \"grid\" of non-negative integers".into())
            })?;
        if t == 0 || t > elements.len() {
            return Err(Error::InvalidArgument(format!(
                "t = {t} must lie in [1, {}]",
                elements.len()
            ))
            .into());
        }
        let distinct = sidon::verify_tsum_distinct(&elements, t, budget.sidon_sums)?;
        return Ok(plain(json!({
            "t": t,
            "size": elements.len(),
            "sums": binomial(elements.len() as u64, t as u64).to_string(),
            "distinct": distinct,
        })));
    }
    let n = n.expect("clap requires n without --check");
    let set = sidon::construct_sidon(n, t, budget.prime_budget, budget.sidon_sums)?;
    Ok(Output {
        stdout: serde_json::to_string(&set).expect("serializable"),
        provenance: Some(provenance("sidon", json!({"n": n, "t": t}))),
    })
}

fn run_hard(cmd: &HardCommand, budget: &Budget) -> Result<Output, CliError> {
    let out = match cmd {
        HardCommand::Finite { p, n, t } => bundle_output(
            "hard finite",
            &construct::hard_over_finite(*p, *n, *t, budget)?,
        ),
        HardCommand::Integers { n, t } => bundle_output(
            "hard integers",
            &construct::hard_over_integers(*n, *t, budget)?,
        ),
        HardCommand::Trivial { n } => bundle_output(
            "hard trivial",
            &construct::trivial_hard(*n, budget.trivial_cap)?,
        ),
        HardCommand::Quasipoly { n, c } => bundle_output(
            "hard quasipoly",
            &construct::quasipoly_hard(*n, *c, budget.trivial_cap)?,
        ),
        HardCommand::Amplify { m, input } => {
            let a = read_matrix(input.input.as_deref())?;
            let b = construct::amplify_direct_sum(&a, *m)?;
            with_provenance(
                json!({"matrix": b.to_json()}),
                provenance(
                    "hard amplify",
                    json!({"m": m, "block_rows": a.rows(), "block_cols": a.cols()}),
                ),
            )
        }
    };
    Ok(out)
}

fn gamma_base(m: &ExactMatrix, base: Base) -> Result<FieldDescriptor, Error> {
    Ok(match (base, m.field()) {
        (Base::Own, f) => f.clone(),
        (Base::Prime, FieldDescriptor::Prime { p } | FieldDescriptor::Extension { p, .. }) => {
            FieldDescriptor::prime(*p)?
        }
        (Base::Prime, _) => FieldDescriptor::Rational,
    })
}

fn run_ssdim(cmd: &SsdimCommand, budget: &Budget) -> Result<Output, CliError> {
    match cmd {
        SsdimCommand::Gamma { t, base, input } => {
            let m = read_matrix(input.input.as_deref())?;
            let base = gamma_base(&m, *base)?;
            let value = ssdim::gamma_t(&m, *t, &base, budget.enumeration)?;
            Ok(plain(json!({
                "t": t,
                "base": base.to_json(),
                "value": value,
                "subset_count": binomial((m.rows() * m.cols()) as u64, *t as u64).to_string(),
            })))
        }
        SsdimCommand::Sigma { t, input } => {
            let m = read_matrix(input.input.as_deref())?;
            let value = ssdim::sigma_t(&m, *t, budget.enumeration)?;
            Ok(plain(json!({"t": t, "value": value})))
        }
        SsdimCommand::Bound { s, d, t, n } => {
            Ok(plain(ssdim::bound_eval(*s, *d, *t, *n)?.to_json()))
        }
        SsdimCommand::Certify { n, d, t } => {
            Ok(plain(ssdim::certify_depth_d(*n, *d, *t)?.to_json()))
        }
    }
}

fn run_hitting(cmd: &HittingCommand, budget: &Budget) -> Result<Output, CliError> {
    match cmd {
        HittingCommand::Vand { n, s } => Ok(plain(hitting::vandermonde_vectors(*n, *s)?.to_json())),
        HittingCommand::Rs { q, k } => {
            let g = hitting::rs_generator(RSParams::new(*q, *k)?, budget.enumeration)?;
            Ok(with_provenance(
                json!({"matrix": g.to_json()}),
                provenance("hitting rs", json!({"q": q, "k": k})),
            ))
        }
        HittingCommand::Kernelweight { input } => {
            let g = read_matrix(input.input.as_deref())?;
            let v = match hitting::min_kernel_weight(&g, budget.enumeration)? {
                Some(w) => json!({"kernel": "nonzero", "min_weight": w}),
                None => json!({"kernel": "zero", "min_weight": null}),
            };
            Ok(plain(v))
        }
        HittingCommand::Hit { a, b, input } => {
            let m = read_matrix(input.input.as_deref())?;
            let f = m.field();
            let value = hitting::hit_inner(&m, &parse_vector(f, a)?, &parse_vector(f, b)?)?;
            Ok(plain(json!({"value": f.encode(&value)})))
        }
        HittingCommand::Rowhit { row, s } => {
            let r = parse_vector(&FieldDescriptor::Rational, row)?;
            let h = hitting::vandermonde_vectors(r.len(), *s)?;
            let node = hitting::sparse_row_hit(&r, *s, &h)?;
            Ok(plain(json!({"s": s, "node": node})))
        }
    }
}

fn run_psd(cmd: &PsdCommand, budget: &Budget) -> Result<Output, CliError> {
    match cmd {
        PsdCommand::Build { n } => {
            let pair = psd::build_hard_psd(*n, budget.psd_cap)?;
            Ok(with_provenance(
                pair.to_json(),
                provenance("psd build", json!({"n": n})),
            ))
        }
        PsdCommand::RefuteSym { n, b } => {
            let pair = psd::build_hard_psd(*n, budget.psd_cap)?;
            let b = read_matrix(Some(b))?;
            Ok(plain(psd::refute_symmetric(&b, &pair)?.to_json()))
        }
        PsdCommand::RefuteInv { n, b, c, side } => {
            let pair = psd::build_hard_psd(*n, budget.psd_cap)?;
            let b = read_matrix(Some(b))?;
            let c = read_matrix(Some(c))?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            Ok(plain(
                psd::refute_invertible(&b, &c, side, &pair)?.to_json(),
            ))
        }
    }
}

fn read_circuit(path: &Path) -> Result<CircuitFactorization, Error> {
    slc::parse_slc(&read_text(Some(path))?)
}

fn run_circuit(cmd: &CircuitCommand) -> Result<Output, CliError> {
    match cmd {
        CircuitCommand::Parse { circuit } => {
            let c = read_circuit(circuit)?;
            let layers: Vec<Value> = c
                .factors()
                .iter()
                .map(
                    |m| json!({"rows": m.rows(), "cols": m.cols(), "nonzeros": m.sparsity().total}),
                )
                .collect();
            Ok(plain(json!({
                "field": c.field().to_json(),
                "depth": c.depth(),
                "size": c.size(),
                "layers": layers,
            })))
        }
        CircuitCommand::Verify { target, circuit } => {
            let a = read_matrix(Some(target))?;
            let c = read_circuit(circuit)?;
            let v = slc::verify_factorization(&c, &a)?;
            let mut out = json!({"equal": v.equal, "size": v.size});
            if let Some((i, j)) = v.difference {
                let f = a.field();
                out["difference"] = json!({
                    "row": i + 1,
                    "col": j + 1,
                    "expected": f.encode(a.get(i, j)),
                    "found": f.encode(v.product.get(i, j)),
                });
            }
            Ok(plain(out))
        }
        CircuitCommand::Emit { circuit } => {
            let text = slc::emit_slc(&read_circuit(circuit)?);
            Ok(Output {
                stdout: text.trim_end().to_string(),
                provenance: None,
            })
        }
    }
}

fn run_search(
    input: Option<&Path>,
    m_max: Option<usize>,
    s_max: Option<usize>,
    nodes: Option<u64>,
    budget: &Budget,
) -> Result<Output, CliError> {
    let a = read_matrix(input)?;
    let n = a.rows();
    let m_max = m_max.unwrap_or(n.min(MAX_INNER));
    let s_max = s_max.unwrap_or(a.sparsity().total + n);
    let r = search::min_depth2_sparsity(&a, m_max, s_max, nodes.unwrap_or(budget.search_nodes))?;
    Ok(plain(json!({
        "status": if r.size.is_some() { "found" } else { "none" },
        "size": r.size,
        "m_max": r.m_max,
        "s_max": r.s_max,
        "nodes": r.nodes,
        "witness": r.witness.as_ref().map(slc::emit_slc),
    })))
}
