use std::path::Path;
use std::time::Instant;

use rh_core::connection::{classify as run_classify, Classification, Status};
use rh_core::curve::{newton_puiseux, verify_branch, Normalization};
use rh_core::error::CurveError;
use rh_core::io::{self, branch_to_json, connection_to_json, polynomial_to_json};
use rh_core::local_algebra::ideal_membership;
use rh_core::paper::{run_checklist, CheckStatus};
use serde_json::{json, Value};

use crate::report::{self, head, print_json, tool, Style};
use crate::Common;

const DEFAULT_ORDER: usize = 40;
const DEFAULT_CAP: u32 = 8;
const SUMMARY_TERMS: usize = 3;

fn read(path: &Path, json: bool) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        report::error("io", format!("{}: {e}", path.display()), json);
        report::PARSE_ERROR
    })
}

fn branch_summary(nz: &Normalization) -> Vec<Value> {
    nz.branches()
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let (ox, oy) = b.orders();
            json!({
                "index": j,
                "orders": [ox, oy],
                "residual_order": verify_branch(nz.curve(), b),
                "x": head(b.x(), SUMMARY_TERMS),
                "y": head(b.y(), SUMMARY_TERMS),
            })
        })
        .collect()
}

fn text(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn orders(v: &Value) -> String {
    let part = |o: &Value| o.as_u64().map_or_else(|| "inf".to_string(), |k| k.to_string());
    format!("{}, {}", part(&v[0]), part(&v[1]))
}

pub fn puiseux(path: &Path, opts: Common) -> u8 {
    let raw = match read(path, opts.json) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let curve = match io::parse_curve(&raw) {
        Ok(c) => std::sync::Arc::new(c),
        Err(e) => {
            report::error("parse", e, opts.json);
            return report::PARSE_ERROR;
        }
    };
    let order = opts.order.unwrap_or(DEFAULT_ORDER);
    let nz = match newton_puiseux(curve.clone(), order) {
        Ok(nz) => nz,
        Err(e) => {
            let kind = if matches!(e, CurveError::IrrationalLeadingCoefficient { .. }) { "irrational" } else { "puiseux" };
            report::error(kind, e, opts.json);
            return report::NORMALIZATION_ERROR;
        }
    };
    if opts.json {
        let branches: Vec<Value> = nz
            .branches()
            .iter()
            .zip(branch_summary(&nz))
            .map(|(b, mut s)| {
                s["branch"] = branch_to_json(b);
                s
            })
            .collect();
        print_json(&json!({
            "tool": tool(),
            "command": "puiseux",
            "input": { "f": polynomial_to_json(curve.f()) },
            "order": order,
            "seed": opts.seed,
            "branches": branches,
        }));
    } else {
        println!("f = {}", curve.f());
        println!("{} branch(es) mod s^{order}", nz.branches().len());
        for s in branch_summary(&nz) {
            println!(
                "  [{}] orders ({}) residual order {}\n      x = {}\n      y = {}",
                s["index"],
                orders(&s["orders"]),
                text(&s["residual_order"]),
                text(&s["x"]),
                text(&s["y"])
            );
        }
    }
    report::OK
}

fn exit_code(status: Status) -> u8 {
    match status {
        Status::StrongFrame => report::OK,
        Status::NonTame => report::NON_TAME,
        Status::NoStrongFrameUpToOrder => report::NO_STRONG_FRAME,
        Status::FlatnessFailed => report::FLATNESS_FAILED,
    }
}

fn classification_json(cl: &Classification) -> Value {
    let frame = cl.frame.as_ref().map(|f| {
        json!({
            "branches": f.frames.iter().enumerate().map(|(j, bf)| json!({
                "index": j,
                "residual_ok": bf.residual_ok,
                "entries": bf.s.iter().map(|row| row.iter().map(|s| head(s, SUMMARY_TERMS)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "strong": f.strong,
        })
    });
    let witness = cl.witness.as_ref().map(|w| {
        json!({
            "h": polynomial_to_json(&w.h),
            "torsion_form": { "dx": polynomial_to_json(w.torsion_form.dx()), "dy": polynomial_to_json(w.torsion_form.dy()) },
            "is_zero": w.is_zero,
            "is_torsion": w.is_torsion,
        })
    });
    json!({
        "status": cl.status,
        "flatness": cl.flatness,
        "frame": frame,
        "primitive": cl.primitive,
        "parallel_check": cl.parallel_check,
        "strong_frame": cl.strong_frame.as_ref().map(|p| p.iter().map(|row| row.iter().map(polynomial_to_json).collect::<Vec<_>>()).collect::<Vec<_>>()),
        "witness": witness,
        "note": cl.note,
    })
}

pub fn classify(path: &Path, opts: Common) -> u8 {
    let start = Instant::now();
    let raw = match read(path, opts.json) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let problem = match io::parse_problem(&raw) {
        Ok(p) => p,
        Err(e) => {
            report::error("parse", e, opts.json);
            return report::PARSE_ERROR;
        }
    };
    let order = opts.order.or(problem.order).unwrap_or(DEFAULT_ORDER);
    let cap = opts.cap.or(problem.degree_cap).unwrap_or(DEFAULT_CAP);
    let seed = opts.seed.or(problem.seed);
    let (source, nz) = match &problem.branches {
        Some(bs) => {
            let short = bs.iter().map(|b| b.order()).min().unwrap_or(0);
            let built = if short < order {
                Err(format!("branches are known mod s^{short}, below the order {order}"))
            } else {
                bs.iter()
                    .map(|b| b.truncate(order))
                    .collect::<Result<Vec<_>, _>>()
                    .and_then(|bs| Normalization::new(problem.curve.clone(), bs))
                    .map_err(|e| e.to_string())
            };
            ("input", built)
        }
        None => ("newton-puiseux", newton_puiseux(problem.curve.clone(), order).map_err(|e| e.to_string())),
    };
    let nz = match nz {
        Ok(nz) => nz,
        Err(e) => {
            report::error("normalization", e, opts.json);
            return report::NORMALIZATION_ERROR;
        }
    };
    let cl = match run_classify(&problem.connection, &nz, order, cap) {
        Ok(cl) => cl,
        Err(e) => {
            report::error("classify", e, opts.json);
            return report::NORMALIZATION_ERROR;
        }
    };
    let elapsed = start.elapsed().as_millis() as u64;
    if opts.json {
        let mut v = classification_json(&cl);
        v["tool"] = tool();
        v["command"] = json!("classify");
        v["input"] = json!({
            "curve": { "f": polynomial_to_json(problem.curve.f()) },
            "connection": connection_to_json(&problem.connection),
            "order": order,
            "degree_cap": cap,
        });
        v["normalization"] = json!({ "source": source, "branches": branch_summary(&nz) });
        v["seed"] = json!(seed);
        v["timing_ms"] = json!(elapsed);
        print_json(&v);
    } else {
        print_classification(&cl, &nz, source, order, cap);
    }
    exit_code(cl.status)
}

fn print_classification(cl: &Classification, nz: &Normalization, source: &str, order: usize, cap: u32) {
    let style = Style::from_env();
    println!("curve f = {}", nz.curve().f());
    println!("branches ({source}), N = {order}, D = {cap}");
    for s in branch_summary(nz) {
        println!("  [{}] x = {}, y = {}", s["index"], text(&s["x"]), text(&s["y"]));
    }
    let flat = cl.flatness.iter().all(|v| v.is_feasible());
    println!("flat up to cap: {}", if flat { style.good("yes") } else { style.bad("no (certified)") });
    if let Some(f) = &cl.frame {
        println!("frame strongly holomorphic: {}", f.is_strong());
        for (j, bf) in f.frames.iter().enumerate() {
            println!("  branch {j}: S[0][0] = {}", head(&bf.s[0][0], SUMMARY_TERMS));
        }
    }
    if let Some(w) = &cl.witness {
        println!("H = {}", w.h);
        println!("torsion form = {}", w.torsion_form);
        println!("  vanishes on branches mod s^{}: {}", w.is_torsion.order_checked, w.is_torsion.torsion);
        println!("  zero in forms: {:?} ({})", w.is_zero.status(), w.is_zero.truncation());
    }
    if let Some(note) = &cl.note {
        println!("{}", style.dim(note));
    }
    let status = format!("{:?}", cl.status);
    println!("status: {}", if cl.status == Status::StrongFrame { style.good(&status) } else { style.bad(&status) });
}

pub fn paper_example(opts: Common) -> u8 {
    let order = opts.order.unwrap_or(DEFAULT_ORDER);
    let cap = opts.cap.unwrap_or(DEFAULT_CAP);
    let checks = match run_checklist(order, cap) {
        Ok(c) => c,
        Err(e) => {
            report::error("usage", e, opts.json);
            return report::PARSE_ERROR;
        }
    };
    let first_fail = checks.iter().find(|c| c.status == CheckStatus::Fail);
    if opts.json {
        print_json(&json!({
            "tool": tool(),
            "command": "paper-example",
            "order": order,
            "degree_cap": cap,
            "seed": opts.seed,
            "checks": checks,
            "passed": first_fail.is_none(),
        }));
    } else {
        let style = Style::from_env();
        for c in &checks {
            let tag = match c.status {
                CheckStatus::Pass => style.good("PASS"),
                CheckStatus::Fail => style.bad("FAIL"),
                CheckStatus::Skipped => style.dim("SKIP"),
            };
            let extra = match c.status {
                CheckStatus::Skipped => format!(" ({})", c.detail["reason"].as_str().unwrap_or("")),
                _ if c.id == 'h' => format!(" (first nonzero exponent {})", c.detail["first_nonzero_exponent"]),
                _ => String::new(),
            };
            println!("{tag} ({}) {}{extra}", c.id, c.name);
        }
    }
    match first_fail {
        Some(c) => {
            eprintln!("rh: check ({}) failed: {}", c.id, c.name);
            report::CHECK_FAILED
        }
        None => report::OK,
    }
}

pub fn membership(target: &Path, generators: &Path, opts: Common) -> u8 {
    let (t, g) = match (read(target, opts.json), read(generators, opts.json)) {
        (Ok(t), Ok(g)) => (t, g),
        _ => return report::PARSE_ERROR,
    };
    let parsed = io::parse_polynomial(&t).and_then(|t| io::parse_generators(&g).map(|g| (t, g)));
    let (target, gens) = match parsed {
        Ok(p) => p,
        Err(e) => {
            report::error("parse", e, opts.json);
            return report::PARSE_ERROR;
        }
    };
    let cap = opts.cap.unwrap_or(DEFAULT_CAP);
    let r = ideal_membership(&target, &gens, cap);
    if opts.json {
        print_json(&json!({
            "tool": tool(),
            "command": "membership",
            "input": {
                "target": polynomial_to_json(&target),
                "generators": gens.iter().map(polynomial_to_json).collect::<Vec<_>>(),
                "degree_cap": cap,
            },
            "seed": opts.seed,
            "verdict": r.verdict,
            "multipliers": r.multipliers.as_ref().map(|m| m.iter().map(polynomial_to_json).collect::<Vec<_>>()),
        }));
    } else {
        println!("target = {target}");
        for (i, g) in gens.iter().enumerate() {
            println!("  g{i} = {g}");
        }
        println!("{:?} ({})", r.verdict.status(), r.verdict.truncation());
        match &r.multipliers {
            Some(hs) => {
                for (i, h) in hs.iter().enumerate() {
                    println!("  h{i} = {h}");
                }
            }
            None => {
                let w: Vec<String> = r.verdict.witness_entries().iter().map(|(l, c)| format!("{l}: {c}")).collect();
                println!("  witness {{{}}}", w.join(", "));
            }
        }
    }
    report::OK
}
