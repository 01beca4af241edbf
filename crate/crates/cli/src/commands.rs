use crate::{Cli, Command, Failure, Outcome, Selection};
use fqg::divisibility::{
    capture_and_extract, default_depth, lcm_up_to, main_theorem_suite, root_chain_search, second_proof_diagnostics,
    CaseKind, SuiteConfig,
};
use fqg::functional::Functional;
use fqg::hypergroup::{build_hypergroup_from_idempotent, verify_duality_theorem, verify_hypergroup, Hypergroup};
use fqg::idempotent::{enumerate_idempotents_bruteforce, is_idempotent_state};
use fqg::io::{self, functional_json, report_json, sci};
use fqg::poisson::{is_conditionally_positive, levy_decompose, random_generator};
use fqg::quantum_group::{builtin, check_corepresentations, check_orthogonality, irreps, verify_cqg, IrrepTable, QuantumGroup};
use fqg::report::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::path::Path;

enum Loaded {
    Group(QuantumGroup),
    Hyper(Hypergroup),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(cli: &Cli) -> Result<Loaded, Failure> {
    match (&cli.input, &cli.builtin) {
        (Some(p), _) => {
            let text = read(p)?;
            let kind = serde_json::from_str::<Value>(&text)
                .map_err(|e| Failure::Input(format!("invalid JSON: {e}")))?
                .get("kind")
                .and_then(Value::as_str)
                .map(str::to_owned);
            if kind.as_deref() == Some("hypergroup") {
                Ok(Loaded::Hyper(io::parse_hypergroup(&text)?))
            } else {
                Ok(Loaded::Group(io::parse_quantum_group(&text)?))
            }
        }
        (None, Some(name)) => Ok(Loaded::Group(builtin(name)?)),
        (None, None) => Err(Failure::Input("one of --input or --builtin is required".into())),
    }
}

fn load_group(cli: &Cli) -> Result<QuantumGroup, Failure> {
    match load(cli)? {
        Loaded::Group(g) => Ok(g),
        Loaded::Hyper(_) => Err(Failure::Input("this command needs a quantum group, not a hypergroup".into())),
    }
}

fn report_lines(rep: &Report, indent: &str) -> Vec<String> {
    rep.checks
        .iter()
        .map(|c| format!("{indent}{:<44} {:>12} {:>12} {}", c.name, sci(c.residual), sci(c.tol), if c.pass { "ok" } else { "FAIL" }))
        .collect()
}

fn outcome(pass: bool, body: Map<String, Value>, lines: Vec<String>) -> Result<Outcome, Failure> {
    Ok(Outcome { pass, body, lines })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify => verify(cli),
        Command::Irreps => irreps_cmd(cli),
        Command::Idempotents => idempotents(cli),
        Command::Hypergroup(sel) => hypergroups(cli, sel),
        Command::Duality(sel) => duality(cli, sel),
        Command::PoissonDecompose { selection, generator } => poisson(cli, selection, generator.as_deref()),
        Command::DivisibleCheck { state, root_order, depth } => divisible(cli, state, *root_order, *depth),
        Command::Suite { samples } => suite(cli, *samples),
    }
}

fn verify(cli: &Cli) -> Result<Outcome, Failure> {
    let (rep, dim, blocks, kind) = match load(cli)? {
        Loaded::Group(g) => (verify_cqg(&g, cli.tol), g.dim(), g.blocks.sizes.clone(), "quantum_group"),
        Loaded::Hyper(h) => (verify_hypergroup(&h, cli.tol), h.dim(), h.blocks.sizes.clone(), "hypergroup"),
    };
    let mut body = Map::new();
    body.insert("kind".into(), json!(kind));
    body.insert("dim".into(), json!(dim));
    body.insert("blocks".into(), json!(blocks));
    body.insert("checks".into(), report_json(&rep));
    let mut lines = vec![format!("{kind}, dim {dim}, blocks {blocks:?}")];
    lines.extend(report_lines(&rep, "  "));
    outcome(rep.passed(), body, lines)
}

fn irreps_cmd(cli: &Cli) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let mut rep = check_orthogonality(&qg, &table, cli.tol.max(1e-8));
    rep.extend("corep.", check_corepresentations(&qg, &table, cli.tol.max(1e-8)));
    let mut body = Map::new();
    body.insert("sizes".into(), json!(table.sizes));
    body.insert("trivial".into(), json!(table.trivial));
    body.insert("checks".into(), report_json(&rep));
    let mut lines = vec![format!("irreducible dimensions {:?}, trivial class {}", table.sizes, table.trivial)];
    lines.extend(report_lines(&rep, "  "));
    outcome(rep.passed(), body, lines)
}

fn enumerate(qg: &QuantumGroup, table: &IrrepTable) -> Result<Vec<Functional>, Failure> {
    let list = enumerate_idempotents_bruteforce(qg, table)?;
    if list.partial {
        return Err(Failure::Math("idempotent enumeration ran out of budget".into()));
    }
    Ok(list.states)
}

fn idempotents(cli: &Cli) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let states = enumerate(&qg, &table)?;
    let mut pass = true;
    let mut entries = Vec::new();
    let mut lines = vec![format!("{} idempotent states", states.len())];
    for (i, phi) in states.iter().enumerate() {
        let rep = is_idempotent_state(&qg, &table, phi, cli.tol.max(1e-8))?;
        pass &= rep.passed();
        lines.push(format!("  #{i}: {}", covector_text(phi)));
        lines.extend(report_lines(&rep, "      "));
        entries.push(json!({"index": i, "covector": functional_json(phi), "checks": report_json(&rep)}));
    }
    let mut body = Map::new();
    body.insert("count".into(), json!(states.len()));
    body.insert("states".into(), Value::Array(entries));
    outcome(pass, body, lines)
}

fn covector_text(f: &Functional) -> String {
    let parts: Vec<String> = f
        .covec
        .iter()
        .map(|z| if z.im.abs() < 1e-12 { format!("{:.6}", z.re) } else { format!("{:.6}{:+.6}i", z.re, z.im) })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn selected(qg: &QuantumGroup, table: &IrrepTable, sel: &Selection) -> Result<Vec<(String, Functional)>, Failure> {
    if let Some(p) = &sel.phi {
        let phi = io::parse_functional(&read(p)?, qg.dim())?;
        return Ok(vec![(p.display().to_string(), phi)]);
    }
    let states = enumerate(qg, table)?;
    match sel.idempotent_index {
        Some(i) => {
            let phi = states
                .get(i)
                .ok_or_else(|| Failure::Input(format!("idempotent index {i} out of range (< {})", states.len())))?;
            Ok(vec![(format!("#{i}"), phi.clone())])
        }
        None => Ok(states.into_iter().enumerate().map(|(i, p)| (format!("#{i}"), p)).collect()),
    }
}

fn hypergroups(cli: &Cli, sel: &Selection) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let mut pass = true;
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (label, phi) in selected(&qg, &table, sel)? {
        let h = build_hypergroup_from_idempotent(&qg, &phi)?;
        let rep = verify_hypergroup(&h, cli.tol);
        pass &= rep.passed();
        lines.push(format!("idempotent {label}: hypergroup of dim {}, blocks {:?}", h.dim(), h.blocks.sizes));
        lines.extend(report_lines(&rep, "  "));
        entries.push(json!({
            "idempotent": label,
            "dim": h.dim(),
            "blocks": h.blocks.sizes,
            "checks": report_json(&rep),
            "presentation": io::hypergroup_json(&h),
        }));
    }
    let mut body = Map::new();
    body.insert("hypergroups".into(), Value::Array(entries));
    outcome(pass, body, lines)
}

fn duality(cli: &Cli, sel: &Selection) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let mut pass = true;
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (label, phi) in selected(&qg, &table, sel)? {
        let rep = verify_duality_theorem(&qg, &phi, cli.tol.max(1e-8))?;
        pass &= rep.passed();
        lines.push(format!("idempotent {label}"));
        lines.extend(report_lines(&rep, "  "));
        entries.push(json!({"idempotent": label, "checks": report_json(&rep)}));
    }
    let mut body = Map::new();
    body.insert("pairs".into(), Value::Array(entries));
    outcome(pass, body, lines)
}

fn poisson(cli: &Cli, sel: &Selection, generator: Option<&Path>) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let sel = if sel.phi.is_none() && sel.idempotent_index.is_none() {
        Selection { idempotent_index: Some(0), phi: None }
    } else {
        sel.clone()
    };
    let (label, phi) = selected(&qg, &table, &sel)?.remove(0);
    let u = match generator {
        Some(p) => io::parse_functional(&read(p)?, qg.dim())?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let rate = rng.gen_range(0.1..1.5);
            random_generator(&qg, &phi, rate, &mut rng)
        }
    };
    let cp = is_conditionally_positive(&qg, &phi, &u, cli.tol)?;
    let mut body = Map::new();
    body.insert("idempotent".into(), json!(label));
    body.insert("generator".into(), functional_json(&u));
    body.insert("conditionally_positive".into(), json!(cp));
    let mut lines = vec![format!("idempotent {label}: {}", covector_text(&phi)), format!("generator {}", covector_text(&u))];
    lines.push(format!("conditionally positive: {cp}"));
    match levy_decompose(&qg, &phi, &u, cli.tol.min(1e-12)) {
        Ok(dec) => {
            let recon = ((&dec.jump - &dec.phi) * dec.rate).distance_max(&u);
            body.insert(
                "decomposition".into(),
                json!({"phi": functional_json(&dec.phi), "rate": dec.rate, "jump": functional_json(&dec.jump)}),
            );
            body.insert("reconstruction_residual".into(), json!(sci(recon)));
            lines.push(format!("rate {:.9}", dec.rate));
            lines.push(format!("jump {}", covector_text(&dec.jump)));
            lines.push(format!("reconstruction residual {}", sci(recon)));
            outcome(cp && recon <= cli.tol.max(1e-9), body, lines)
        }
        Err(e) => {
            body.insert("decomposition_error".into(), json!(e.to_string()));
            lines.push(format!("no decomposition: {e}"));
            outcome(false, body, lines)
        }
    }
}

fn divisible(cli: &Cli, state: &Path, root_order: Option<u64>, depth: Option<usize>) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let omega = io::parse_functional(&read(state)?, qg.dim())?;
    let n = root_order.unwrap_or_else(|| lcm_up_to(table.dual_blocks.dim()));
    let depth = depth.unwrap_or_else(|| default_depth(n));
    let mut body = Map::new();
    let mut lines = vec![format!("root order {n}, depth {depth}")];
    let chain = match root_chain_search(&qg, &table, &omega, n, depth, cli.tol) {
        Ok(c) => c,
        Err(e) => {
            body.insert("poisson".into(), json!(false));
            body.insert("diagnostics".into(), json!({"root_search": e.to_string()}));
            lines.push(format!("root search failed: {e}"));
            lines.push("the state has no chain of state roots of this order, so it is not infinitely divisible".into());
            return outcome(false, body, lines);
        }
    };
    let indices: Vec<u64> = chain.roots.iter().map(|(k, _)| *k).collect();
    body.insert("chain".into(), json!({"root_order": n, "indices": indices, "max_clip": sci(chain.meta.max_clip)}));
    lines.push(format!("chain indices {indices:?}, max clip {}", sci(chain.meta.max_clip)));
    let ex = capture_and_extract(&qg, &table, &chain, None, cli.tol.max(1e-9));
    let sp = second_proof_diagnostics(&qg, &table, &chain, None, cli.tol.max(1e-9));
    let mut diag = Map::new();
    let mut pass = true;
    match &ex {
        Ok(ex) => {
            body.insert(
                "decomposition".into(),
                json!({
                    "phi": functional_json(&ex.phi),
                    "rate": ex.decomposition.rate,
                    "jump": functional_json(&ex.decomposition.jump),
                    "generator": functional_json(&ex.decomposition.generator),
                }),
            );
            diag.insert("capture".into(), report_json(&ex.report));
            pass &= ex.report.passed();
            lines.push(format!("captured idempotent {}", covector_text(&ex.phi)));
            lines.push(format!("rate {:.9}, jump {}", ex.decomposition.rate, covector_text(&ex.decomposition.jump)));
            lines.extend(report_lines(&ex.report, "  capture."));
        }
        Err(e) => {
            pass = false;
            diag.insert("capture_error".into(), json!(e.to_string()));
            lines.push(format!("capture failed: {e}"));
        }
    }
    match &sp {
        Ok(sp) => {
            diag.insert("second_route".into(), report_json(&sp.report));
            diag.insert("m_bound".into(), json!(sci(sp.m_bound)));
            diag.insert("singular_values".into(), json!(sp.singular_values.iter().map(|&x| sci(x)).collect::<Vec<_>>()));
            diag.insert("singular".into(), json!(sp.singular));
            let roots: Vec<Value> = sp
                .per_root
                .iter()
                .map(|d| {
                    json!({
                        "index": d.index,
                        "p_trivial": sci(d.p_trivial),
                        "distance_to_counit": sci(d.distance_to_counit),
                        "schatten_mean": sci(d.schatten_mean),
                        "key_inequality": d.key_inequality,
                        "scaled_distance": sci(d.scaled_distance),
                    })
                })
                .collect();
            diag.insert("roots".into(), Value::Array(roots));
            if let Ok(ex) = &ex {
                let agree = ex.decomposition.generator.distance_max(&sp.generator);
                diag.insert("route_agreement".into(), json!(sci(agree)));
                pass &= agree <= 1e-6;
                lines.push(format!("routes agree to {}", sci(agree)));
            }
            pass &= sp.report.passed();
            lines.push(format!("M = {}", sci(sp.m_bound)));
            lines.extend(report_lines(&sp.report, "  second."));
        }
        Err(e) => {
            pass = false;
            diag.insert("second_route_error".into(), json!(e.to_string()));
            lines.push(format!("second route failed: {e}"));
        }
    }
    body.insert("poisson".into(), json!(pass));
    body.insert("diagnostics".into(), Value::Object(diag));
    outcome(pass, body, lines)
}

fn suite(cli: &Cli, samples: usize) -> Result<Outcome, Failure> {
    let qg = load_group(cli)?;
    let table = irreps(&qg)?;
    let cfg = SuiteConfig { samples, seed: cli.seed, tol: cli.tol };
    let rep = main_theorem_suite(&qg, &table, &cfg)?;
    let mut lines = vec![format!("root order {}, depth {}", rep.root_order, rep.depth)];
    let cases: Vec<Value> = rep
        .cases
        .iter()
        .map(|c| {
            lines.push(format!("  {:<44} {} {}", c.label, if c.passed { "ok  " } else { "FAIL" }, c.detail));
            json!({
                "label": c.label,
                "kind": match c.kind { CaseKind::Poisson => "poisson", CaseKind::NonDivisible => "non_divisible" },
                "pass": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    let mut body = Map::new();
    body.insert("root_order".into(), json!(rep.root_order));
    body.insert("depth".into(), json!(rep.depth));
    body.insert("cases".into(), Value::Array(cases));
    outcome(rep.passed(), body, lines)
}
