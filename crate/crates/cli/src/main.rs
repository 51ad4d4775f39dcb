mod args;
mod output;

use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use shadowsum::cssum::{constants, cs_state_sum, rel_dev, wlo_cs};
use shadowsum::qracah::{compare_table, compare_table_conjugated, FusionTable};
use shadowsum::shadowlink::{derive_shadow, parse_link, shadow_state_sum, wlo_shadow, Shadow};
use shadowsum::{verify, AlgebraSpec, Error, ModularData, RootSystem, Tolerances};

use args::{Cli, Command, Format, LinkArgs, Target, VerifyArgs};
use output::{complex, real, render_json, text};

/// Grid used by `verify` when no algebra is given.
const GRID: [(&str, i64); 4] = [("A1", 8), ("A2", 4), ("B2", 3), ("G2", 2)];

/// A failure reported as `{code, message, context}` with exit status 2.
struct Failure {
    code: String,
    message: String,
    context: Value,
}

impl Failure {
    fn usage(message: impl Into<String>, context: Value) -> Self {
        Failure { code: "UsageError".into(), message: message.into(), context }
    }

    fn lib(e: Error, context: Value) -> Self {
        Failure { code: e.code().into(), message: e.to_string(), context }
    }
}

/// Emitted document plus whether every check in it passed.
struct Outcome {
    doc: Value,
    table: String,
    pass: bool,
}

struct Ctx {
    weyl_cap: Option<u128>,
    tol: Tolerances,
}

impl Ctx {
    fn modular_data(&self, algebra: &str, level: i64) -> Result<ModularData, Failure> {
        let context = json!({ "algebra": algebra, "level": level });
        let spec: AlgebraSpec = algebra.parse().map_err(|e| Failure::lib(e, context.clone()))?;
        let rs = match self.weyl_cap {
            Some(cap) => RootSystem::with_cap(spec, cap),
            None => RootSystem::new(spec),
        }
        .map_err(|e| Failure::lib(e, context.clone()))?;
        ModularData::new(rs, level).map_err(|e| Failure::lib(e, context))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SHADOWSUM_THREADS") else {
        return Ok(());
    };
    let ctx = json!({ "SHADOWSUM_THREADS": raw });
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(Failure::usage("SHADOWSUM_THREADS must be a positive integer", ctx)),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string(), ctx))
}

fn weight_list(ws: &[shadowsum::Weight]) -> Value {
    Value::Array(ws.iter().map(|w| json!(w.0)).collect())
}

fn modular(ctx: &Ctx, t: &Target) -> Result<Outcome, Failure> {
    let md = ctx.modular_data(&t.algebra, t.level)?;
    let n = md.len();
    let mut checks = md.modular_identity_reports();
    checks.push(md.qdim_check());
    for c in checks.iter_mut().take(2) {
        *c = shadowsum::CheckReport::new(c.name.clone(), c.max_dev, ctx.tol.modular);
    }
    let pass = checks.iter().all(|c| c.pass);
    let s: Vec<Value> = md.s.rows().into_iter().map(|r| Value::Array(r.into_iter().map(complex).collect())).collect();
    let c: Vec<Value> = (0..n).map(|i| json!((0..n).map(|j| (md.conj[i] == j) as i64).collect::<Vec<_>>())).collect();
    let doc = json!({
        "command": "modular",
        "algebra": md.rs.spec.to_string(),
        "level": md.level,
        "shifted_level": md.shifted_level(),
        "exponent_sign": md.exponent_sign,
        "central_charge": md.central_charge.to_string(),
        "alcove": weight_list(&md.alcove),
        "qdims": (0..n).map(|i| real(md.qdim_at(i))).collect::<Vec<_>>(),
        "s": s,
        "t": md.t.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "c": c,
        "checks": checks_json(&checks),
        "pass": pass,
    });
    let mut table = format!(
        "{} level {}  (k + c_G = {}, c = {}, exponent sign {})\n",
        md.rs.spec,
        md.level,
        md.shifted_level(),
        md.central_charge,
        md.exponent_sign
    );
    table.push_str(&format!("{:<4} {:<16} {:<22} {:<32} conj\n", "idx", "weight", "qdim", "T"));
    for i in 0..n {
        table.push_str(&format!(
            "{:<4} {:<16} {:<22} {:<32} {}\n",
            i,
            format!("{:?}", md.alcove[i].0),
            text(&real(md.qdim_at(i))),
            text(&complex(md.t[i])),
            md.conj[i]
        ));
    }
    table.push_str("S:\n");
    for row in md.s.rows() {
        let cells: Vec<String> = row.into_iter().map(|z| text(&complex(z))).collect();
        table.push_str(&format!("  {}\n", cells.join("  ")));
    }
    table.push_str(&checks_table(&checks));
    Ok(Outcome { doc, table, pass })
}

fn checks_json(checks: &[shadowsum::CheckReport]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({ "name": c.name, "max_dev": real(c.max_dev), "tol": real(c.tol), "pass": c.pass }))
            .collect(),
    )
}

fn checks_table(checks: &[shadowsum::CheckReport]) -> String {
    checks
        .iter()
        .map(|c| {
            format!(
                "[{}] {}: {} (tol {})\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                text(&real(c.max_dev)),
                text(&real(c.tol))
            )
        })
        .collect()
}

fn fusion(ctx: &Ctx, t: &Target) -> Result<Outcome, Failure> {
    let md = ctx.modular_data(&t.algebra, t.level)?;
    let n = md.len();
    let table = FusionTable::build(&md);
    let cmp = compare_table(&table, ctx.tol.fusion);
    let conj = compare_table_conjugated(&table, &md, ctx.tol.fusion);
    let cube = |f: &dyn Fn(usize, usize, usize) -> Value| -> Value {
        (0..n)
            .map(|g| (0..n).map(|a| (0..n).map(|b| f(g, a, b)).collect::<Value>()).collect::<Value>())
            .collect()
    };
    let doc = json!({
        "command": "fusion",
        "algebra": md.rs.spec.to_string(),
        "level": md.level,
        "alcove": weight_list(&md.alcove),
        "n_lmn": cube(&|a, b, c| json!(md.n3(a, b, c))),
        "verlinde": cube(&|g, a, b| real(table.verlinde_at(g, a, b))),
        "racah": cube(&|g, a, b| json!(table.racah_at(g, a, b))),
        "index_order": "[gamma][alpha][beta] for N^beta_{gamma alpha}",
        "max_dev": real(cmp.max_dev),
        "mismatches": cmp.mismatches,
        "negative": cmp.negative,
        "racah_matches_conjugate_gamma": conj.pass,
        "tol": real(ctx.tol.fusion),
        "pass": cmp.pass,
    });
    let mut out = format!("{} level {}: N^beta_(gamma alpha), nonzero entries\n", md.rs.spec, md.level);
    out.push_str(&format!("{:<14} {:<14} {:<14} {:>10} {:>6}\n", "gamma", "alpha", "beta", "verlinde", "racah"));
    for g in 0..n {
        for a in 0..n {
            for b in 0..n {
                let v = table.verlinde_at(g, a, b);
                let r = table.racah_at(g, a, b);
                if v.round() != 0.0 || r != 0 {
                    out.push_str(&format!(
                        "{:<14} {:<14} {:<14} {:>10} {:>6}\n",
                        format!("{:?}", md.alcove[g].0),
                        format!("{:?}", md.alcove[a].0),
                        format!("{:?}", md.alcove[b].0),
                        text(&real(v)),
                        r
                    ));
                }
            }
        }
    }
    out.push_str(&format!(
        "[{}] max |verlinde - racah| = {} over {} entries, {} mismatches; racah equals verlinde with gamma conjugated: {}\n",
        if cmp.pass { "PASS" } else { "FAIL" },
        text(&real(cmp.max_dev)),
        n * n * n,
        cmp.mismatches,
        conj.pass
    ));
    Ok(Outcome { doc, table: out, pass: cmp.pass })
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let ctx = json!({ "input": path.display().to_string() });
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure { code: "IoError".into(), message: e.to_string(), context: ctx })?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure { code: "IoError".into(), message: e.to_string(), context: ctx })
}

struct Loaded {
    md: ModularData,
    shadow: Shadow,
    context: Value,
}

fn load_link(ctx: &Ctx, a: &LinkArgs) -> Result<Loaded, Failure> {
    let input = a.input.display().to_string();
    let doc = read_input(&a.input)?;
    let link = parse_link(&doc).map_err(|e| Failure::lib(e, json!({ "input": input })))?;
    let algebra = a.algebra.clone().or(link.algebra.clone());
    let level = a.level.or(link.level);
    let (Some(algebra), Some(level)) = (algebra, level) else {
        return Err(Failure::usage(
            "algebra and level must be given in the document or with --algebra/--level",
            json!({ "input": input }),
        ));
    };
    let md = ctx.modular_data(&algebra, level)?;
    let context = json!({ "input": input, "algebra": algebra, "level": level });
    let shadow = derive_shadow(&link).map_err(|e| Failure::lib(e, context.clone()))?;
    Ok(Loaded { md, shadow, context })
}

fn link_header(l: &Loaded, command: &str) -> Map<String, Value> {
    let sh = &l.shadow;
    let faces: Vec<Value> = sh
        .faces
        .iter()
        .zip(&sh.gleams)
        .map(|(f, g)| json!({ "id": f.id, "euler": f.euler, "gleam": g }))
        .collect();
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("algebra".into(), json!(l.md.rs.spec.to_string()));
    m.insert("level".into(), json!(l.md.level));
    m.insert("genus".into(), json!(sh.genus));
    m.insert("faces".into(), Value::Array(faces));
    m
}

fn link_command(ctx: &Ctx, a: &LinkArgs, command: &str) -> Result<Outcome, Failure> {
    let l = load_link(ctx, a)?;
    let err = |e: Error| Failure::lib(e, l.context.clone());
    let (md, sh) = (&l.md, &l.shadow);
    let kpow = constants(md, sh.genus).k.powi(2 - 2 * sh.genus as i32);
    let mut doc = link_header(&l, command);
    let (primary, other, fields): (Complex64, Complex64, [&str; 2]) = match command {
        "shadow" => {
            let x = shadow_state_sum(md, sh).map_err(err)?;
            let cs = cs_state_sum(sh, md).map_err(err)?;
            (x, cs / kpow, ["shadow_state_sum", "cs_state_sum_over_k_power"])
        }
        "cs-sum" => {
            let cs = cs_state_sum(sh, md).map_err(err)?;
            let x = shadow_state_sum(md, sh).map_err(err)?;
            (cs, x * kpow, ["cs_state_sum", "k_power_times_shadow_state_sum"])
        }
        _ => {
            let w = wlo_shadow(md, sh).map_err(err)?;
            let c = wlo_cs(sh, md).map_err(err)?;
            (w, c, ["wlo_shadow", "wlo_cs"])
        }
    };
    let dev = rel_dev(primary, other);
    let pass = dev < ctx.tol.theorem;
    if command == "wlo" {
        doc.insert("value".into(), complex(primary));
    }
    doc.insert(fields[0].into(), complex(primary));
    doc.insert(fields[1].into(), complex(other));
    if command != "wlo" {
        doc.insert("k".into(), real(constants(md, sh.genus).k));
    }
    doc.insert("rel_dev".into(), real(dev));
    doc.insert("tol".into(), real(ctx.tol.theorem));
    doc.insert("pass".into(), json!(pass));
    let doc = Value::Object(doc);
    let mut table = format!("{} level {}, genus {}\n", md.rs.spec, md.level, sh.genus);
    for (f, g) in sh.faces.iter().zip(&sh.gleams) {
        table.push_str(&format!("  face {:<10} euler {:>3}  gleam {:>3}\n", f.id, f.euler, g));
    }
    for key in fields {
        table.push_str(&format!("{key}: {}\n", text(&doc[key])));
    }
    table.push_str(&format!(
        "[{}] relative difference {} (tol {})\n",
        if pass { "PASS" } else { "FAIL" },
        text(&doc["rel_dev"]),
        text(&doc["tol"])
    ));
    Ok(Outcome { doc, table, pass })
}

fn run_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Outcome, Failure> {
    let targets: Vec<(String, i64)> = match (&a.algebra, a.level) {
        (Some(alg), Some(k)) => vec![(alg.clone(), k)],
        (Some(alg), None) => (1..=3).map(|k| (alg.clone(), k)).collect(),
        (None, None) => GRID.iter().flat_map(|&(alg, kmax)| (1..=kmax).map(move |k| (alg.to_string(), k))).collect(),
        (None, Some(k)) => {
            return Err(Failure::usage("--level needs --algebra", json!({ "level": k })));
        }
    };
    let mut reports = Vec::new();
    let mut table = String::new();
    let mut pass = true;
    for (alg, k) in targets {
        let md = ctx.modular_data(&alg, k)?;
        let r = verify(&md, &ctx.tol).map_err(|e| Failure::lib(e, json!({ "algebra": alg, "level": k })))?;
        pass &= r.pass;
        table.push_str(&format!(
            "== {} level {} (exponent sign {}): {}\n",
            r.algebra,
            r.level,
            r.exponent_sign,
            if r.pass { "PASS" } else { "FAIL" }
        ));
        table.push_str(&checks_table(&r.checks));
        reports.push(json!({
            "algebra": r.algebra,
            "level": r.level,
            "exponent_sign": r.exponent_sign,
            "checks": checks_json(&r.checks),
            "pass": r.pass,
        }));
    }
    let doc = json!({ "command": "verify", "reports": reports, "pass": pass });
    Ok(Outcome { doc, table, pass })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    configure_threads()?;
    let d = Tolerances::default();
    let ctx = Ctx {
        weyl_cap: cli.weyl_cap,
        tol: Tolerances {
            modular: cli.tol_modular.unwrap_or(d.modular),
            fusion: cli.tol_fusion.unwrap_or(d.fusion),
            theorem: cli.tol_theorem.unwrap_or(d.theorem),
        },
    };
    match &cli.command {
        Command::Modular(t) => modular(&ctx, t),
        Command::Fusion(t) => fusion(&ctx, t),
        Command::Shadow(a) => link_command(&ctx, a, "shadow"),
        Command::CsSum(a) => link_command(&ctx, a, "cs-sum"),
        Command::Wlo(a) => link_command(&ctx, a, "wlo"),
        Command::Verify(a) => run_verify(&ctx, a),
    }
}

fn fail(f: Failure) -> ExitCode {
    let obj = json!({ "code": f.code, "message": f.message, "context": f.context });
    eprint!("{}", render_json(&obj));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return fail(Failure::usage(message, json!({ "kind": e.kind().to_string() })));
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => print!("{}", render_json(&out.doc)),
                Format::Table => print!("{}", out.table),
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => fail(f),
    }
}
