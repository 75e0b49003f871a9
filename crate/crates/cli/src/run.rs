//! Execution of a [`JobSpec`] into a JSON report and a plain-text rendering.

use std::fmt::Write as _;

use bgg_core::acceptance::{run_criterion, Mutation, CRITERIA};
use bgg_core::bgg::{
    compressed_report, conjugated_sequence, independent_sequence, insertion_stability, make_compressable,
    model_sequence, preset_span, sequence_report, InsertionPreset, Machine,
};
use bgg_core::homology::{
    build_complex, build_labelled, homology, kostant_eigenvalue_check, kostant_predict, kunneth_compare,
    CasimirScale, ChainComplex,
};
use bgg_core::parabolic::ParabolicPair;
use bgg_core::pathgeom::{self, PathGeomCase};
use bgg_core::rational::{display_q, format_q, parse_q};
use bgg_core::repn::{adjoint_module, Algebra};
use bgg_core::rootdata::{build_root_system, permutations, NodeSet, Perm, Weight, WeylWord};
use bgg_core::{BggError, Result};
use serde_json::{json, Value};

use crate::job::{Command, JobSpec};

pub const SCHEMA: &str = "bgg/1";

#[derive(Clone, Debug)]
pub struct Output {
    pub result: Value,
    pub plain: String,
    /// Whether every verdict in the report holds.
    pub ok: bool,
    /// Per-criterion timings for `selftest`, kept out of the report.
    pub timings: Vec<(u8, f64, u64)>,
}

impl Output {
    fn new(result: Value, plain: String) -> Output {
        Output { result, plain, ok: true, timings: Vec::new() }
    }
}

/// Wraps a result in the versioned envelope.
pub fn envelope(job: &JobSpec, out: &Output) -> Value {
    json!({ "schema": SCHEMA, "command": job.command.name(), "job": job.to_string(), "ok": out.ok, "result": out.result })
}

pub fn error_envelope(e: &BggError) -> Value {
    json!({ "schema": SCHEMA, "error": { "kind": e.kind(), "message": e.to_string() } })
}

pub fn exit_code(e: &BggError) -> i32 {
    match e {
        BggError::Parse(_) | BggError::UnsupportedRank(_) | BggError::Shape(_) | BggError::Nesting(_) => 2,
        BggError::Representability(_) | BggError::TooLarge { .. } | BggError::NotRelative(_) => 3,
        BggError::Internal(_) | BggError::Calibration(_) => 4,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

/// Dynkin-diagram rendering: crossed nodes as `x`, others as `o`, with the
/// coefficient in braces, e.g. `x{0}--x{-2}--o{1}`.
pub fn dynkin(w: &Weight, crossed: &NodeSet) -> String {
    w.0.iter()
        .enumerate()
        .map(|(i, a)| format!("{}{{{}}}", if crossed.contains(i + 1) { 'x' } else { 'o' }, display_q(a)))
        .collect::<Vec<_>>()
        .join("--")
}

fn word_string(w: &WeylWord) -> String {
    if w.word.is_empty() {
        "e".into()
    } else {
        w.word.iter().map(|l| format!("s{l}")).collect::<Vec<_>>().join(" ")
    }
}

fn pair_of(job: &JobSpec) -> Result<ParabolicPair> {
    job.pair_spec().ok_or_else(|| BggError::Parse("missing algebra or q".into()))?.build()
}

fn labelled(job: &JobSpec) -> Result<(ParabolicPair, ChainComplex)> {
    let pair = pair_of(job)?;
    let hw = job.hw.as_ref().ok_or_else(|| BggError::Parse("missing weight".into()))?;
    let cx = build_labelled(&pair, hw)?;
    Ok((pair, cx))
}

fn opt_u64(job: &JobSpec, key: &str) -> Option<u64> {
    job.option(key).map(|v| v.parse().expect("normalised integer"))
}

pub fn run(job: &JobSpec) -> Result<Output> {
    job.validate()?;
    match job.command {
        Command::Rootsys => rootsys(job),
        Command::Hasse => hasse(job),
        Command::Orbit => orbit(job),
        Command::Homology => homology_cmd(job),
        Command::Spectrum => spectrum(job),
        Command::KostantCheck => kostant(job),
        Command::Kunneth => kunneth(job),
        Command::Splitting | Command::Qop => machine(job),
        Command::Compressed => compressed(job),
        Command::Insertion => insertion(job),
        Command::Pathgeom => pathgeom_cmd(job),
        Command::Selftest => selftest(job),
    }
}

fn rootsys(job: &JobSpec) -> Result<Output> {
    let rs = build_root_system(job.rank.expect("validated"))?;
    let mut plain = format!("A{} with {} positive roots, |W| = {}\n", rs.rank, rs.positive_roots.len(), rs.weyl_group_order());
    for (r, (i, j)) in rs.positive_roots.iter().zip(&rs.positive_pairs) {
        writeln!(plain, "  e{}-e{}  {}", i + 1, j + 1, dynkin(r, &NodeSet::empty())).unwrap();
    }
    writeln!(plain, "rho = {}", dynkin(&rs.rho, &NodeSet::empty())).unwrap();
    let form: Vec<Vec<String>> = rs.form.iter().map(|r| r.iter().map(format_q).collect()).collect();
    Ok(Output::new(
        json!({
            "rank": rs.rank,
            "cartan_matrix": rs.cartan_matrix,
            "simple_roots": rs.simple_roots,
            "positive_roots": rs.positive_roots,
            "rho": rs.rho,
            "form": form,
            "weyl_group_order": rs.weyl_group_order(),
        }),
        plain,
    ))
}

fn hasse(job: &JobSpec) -> Result<Output> {
    let pair = pair_of(job)?;
    let rs = &pair.rs;
    let graded = rs.relative_hasse_quotient(&pair.crossed_p, &pair.crossed_q)?;
    let mut levels = Vec::new();
    let mut plain = String::new();
    for (l, ws) in graded.iter().enumerate() {
        let mut entries = Vec::new();
        for w in ws {
            let image = job.hw.as_ref().map(|hw| rs.affine_action(w, hw)).transpose()?;
            let mut line = format!("  [{l}] {}", word_string(w));
            if let Some(im) = &image {
                write!(line, "  -> {}", dynkin(im, &pair.crossed_q)).unwrap();
            }
            plain.push_str(&line);
            plain.push('\n');
            entries.push(json!({ "word": w, "length": l, "affine_image": image }));
        }
        levels.push(entries);
    }
    let count: usize = graded.iter().map(Vec::len).sum();
    plain.insert_str(0, &format!("{count} elements in {} levels\n", graded.len()));
    Ok(Output::new(json!({ "levels": levels, "count": count }), plain))
}

fn orbit(job: &JobSpec) -> Result<Output> {
    let rank = job.rank.expect("validated");
    let rs = build_root_system(rank)?;
    let hw = job.hw.as_ref().expect("validated");
    rs.check_weight(hw)?;
    let regular = rs.character_is_regular(hw)?;
    if let Some(word) = job.option("word") {
        let letters: Vec<usize> = if word.is_empty() { Vec::new() } else { word.split(',').map(|x| x.parse().unwrap()).collect() };
        let w = WeylWord::from_letters(rank, &letters)?;
        let image = rs.affine_action(&w, hw)?;
        let plain = format!("{} . {} = {}\n", word_string(&w), dynkin(hw, &NodeSet::empty()), dynkin(&image, &NodeSet::empty()));
        return Ok(Output::new(json!({ "word": w, "weight": hw, "image": image, "regular": regular }), plain));
    }
    let mut images: Vec<(Weight, WeylWord)> = permutations(rank + 1)
        .into_iter()
        .map(|p| {
            let p = Perm(p);
            (rs.affine_action_perm(&p, hw), WeylWord::from_perm(&p))
        })
        .collect();
    images.sort();
    images.dedup_by(|a, b| a.0 == b.0);
    let dominant: Vec<&Weight> = images.iter().map(|x| &x.0).filter(|w| w.is_dominant()).collect();
    let mut plain = format!("orbit of {} has {} points, regular = {regular}\n", dynkin(hw, &NodeSet::empty()), images.len());
    for (im, w) in &images {
        writeln!(plain, "  {}  via {}", dynkin(im, &NodeSet::empty()), word_string(w)).unwrap();
    }
    let points: Vec<Value> = images.iter().map(|(im, w)| json!({ "weight": im, "word": w })).collect();
    Ok(Output::new(json!({ "weight": hw, "regular": regular, "points": points, "dominant": dominant }), plain))
}

fn homology_cmd(job: &JobSpec) -> Result<Output> {
    let (pair, cx) = labelled(job)?;
    let inv = cx.check_invariants();
    let h = homology(&cx)?;
    let predicted = kostant_predict(&pair, job.hw.as_ref().expect("validated")).ok();
    let labels = h.labels();
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    let harmonic: Vec<usize> = h.degrees.iter().map(|d| d.hodge.harmonic).collect();
    let chain: Vec<usize> = (0..=cx.top()).map(|k| cx.dim(k)).collect();
    let mut plain = format!("chain dims {chain:?}, homology summands {dims:?}, harmonic dims {harmonic:?}\n");
    for d in &h.degrees {
        for c in &d.components {
            writeln!(plain, "  H_{}: {} (dim {}, l = {}, mult {})", d.k, dynkin(&c.label, &pair.crossed_q), c.dim, c.ell, c.multiplicity).unwrap();
        }
    }
    let matches = predicted.as_ref().map(|p| p == &labels);
    if let Some(m) = matches {
        writeln!(plain, "matches the Hasse prediction: {m}").unwrap();
    }
    let mut out = Output::new(
        json!({
            "chain_dims": chain,
            "homology_dims": dims,
            "harmonic_dims": harmonic,
            "degrees": h.degrees,
            "labels": labels,
            "predicted": predicted,
            "matches_prediction": matches,
            "invariants": inv,
        }),
        plain,
    );
    out.ok = inv.ok() && matches != Some(false);
    Ok(out)
}

fn spectrum(job: &JobSpec) -> Result<Output> {
    let (pair, cx) = labelled(job)?;
    let mut degrees = Vec::new();
    let mut plain = String::new();
    for k in 0..=cx.top() {
        let blocks = cx.blocks(k)?;
        let levels = cx.spectrum(k)?;
        writeln!(plain, "degree {k}:").unwrap();
        for b in &blocks {
            writeln!(plain, "  l = {}  {}  dim {}  eigenvalue {}", b.ell, dynkin(&b.label, &pair.crossed_q), b.dim, display_q(&b.eigenvalue)).unwrap();
        }
        degrees.push(json!({ "k": k, "hodge": cx.hodge(k), "levels": levels, "blocks": blocks }));
    }
    Ok(Output::new(json!({ "degrees": degrees }), plain))
}

fn kostant(job: &JobSpec) -> Result<Output> {
    let (_, cx) = labelled(job)?;
    let scale = match job.option("scale") {
        Some("killing") => CasimirScale::Killing,
        _ => CasimirScale::Trace,
    };
    let r = kostant_eigenvalue_check(&cx, scale)?;
    if !r.calibrated {
        return Err(BggError::Calibration(format!("fitted constant {} differs from 1", display_q(&r.kappa))));
    }
    let plain = format!("kappa = {}, {} blocks consistent\n", display_q(&r.kappa), r.entries.len());
    Ok(Output::new(to_value(&r), plain))
}

fn kunneth(job: &JobSpec) -> Result<Output> {
    let pair = pair_of(job)?;
    let r = kunneth_compare(&pair, job.hw.as_ref().expect("validated"))?;
    let mut plain = format!("equal = {}\n", r.equal);
    for (k, (l, rr)) in r.left.iter().zip(&r.right).enumerate() {
        writeln!(plain, "  degree {k}: {} vs {} summands", l.len(), rr.len()).unwrap();
    }
    let mut out = Output::new(to_value(&r), plain);
    out.ok = r.equal;
    Ok(out)
}

fn operator(job: &JobSpec, cx: &ChainComplex) -> Result<(usize, bgg_core::matrix::QMatrix)> {
    let k = opt_u64(job, "degree").unwrap_or(0) as usize;
    if k > cx.top() {
        return Err(BggError::Shape(format!("degree {k} exceeds the top degree {}", cx.top())));
    }
    let m = if k == cx.top() { cx.d_up[k].clone() } else { make_compressable(cx, k, opt_u64(job, "seed"))?.matrix };
    Ok((k, m))
}

fn machine(job: &JobSpec) -> Result<Output> {
    let (_, cx) = labelled(job)?;
    let (k, op) = operator(job, &cx)?;
    let m = Machine::new(&cx, k, &op)?;
    let dims = json!({ "w": m.w_basis.len(), "im_dstar": m.wt_basis.len(), "harmonic": m.harmonic.len() });
    let factors = |p: &bgg_core::bgg::OperatorPolynomial| -> String {
        if p.levels.is_empty() {
            return "none".into();
        }
        p.levels
            .iter()
            .map(|l| format!("l={}: [{}]", l.ell, l.eigenvalues.iter().map(display_q).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let mut out = if job.command == Command::Splitting {
        let v = m.splitting_verdicts();
        let plain = format!("S in degree {k}: factors {}; polynomial degree {}\n{}", factors(&m.s), m.s.degree, verdict_lines(&v));
        let mut o = Output::new(json!({ "degree": k, "dims": dims, "polynomial": m.s, "verdicts": v }), plain);
        o.ok = v.ok();
        o
    } else {
        let v = m.q_verdicts(&cx)?;
        let plain = format!("Q in degree {k}: factors {}; polynomial degree {}\n{}", factors(&m.q), m.q.degree, verdict_lines(&v));
        let mut o = Output::new(json!({ "degree": k, "dims": dims, "polynomial": m.q, "verdicts": v }), plain);
        o.ok = v.ok();
        o
    };
    out.result["seed"] = json!(opt_u64(job, "seed"));
    Ok(out)
}

/// One `name: value` line per field of a verdict record.
fn verdict_lines<T: serde::Serialize>(v: &T) -> String {
    let Value::Object(map) = serde_json::to_value(v).expect("verdicts serialise") else { return String::new() };
    map.iter().map(|(k, x)| format!("  {k}: {x}\n")).collect()
}

fn compressed(job: &JobSpec) -> Result<Output> {
    let (_, cx) = labelled(job)?;
    let (k, op) = operator(job, &cx)?;
    let rep = compressed_report(&cx, k, &op)?;
    let seed = opt_u64(job, "seed").unwrap_or(0);
    let seq = match job.option("sequence").unwrap_or("model") {
        "conjugated" => conjugated_sequence(&cx, seed),
        "independent" => independent_sequence(&cx, seed)?,
        _ => model_sequence(&cx),
    };
    let sr = sequence_report(&cx, &seq)?;
    let mut plain = format!(
        "compressed operator in degree {k}: {} -> {}, {} nonzero entries\n",
        rep.harmonic_dims.0,
        rep.harmonic_dims.1,
        rep.matrix.len()
    );
    if !sr.hypothesis_met {
        plain.push_str("sequence: hypothesis not met (operators do not compose to zero)\n");
    }
    for d in &sr.degrees {
        writeln!(
            plain,
            "  k={} cohomology {} vs {}  match {:?}  iso {:?}  Q correction {}",
            d.k, d.compressed_cohomology, d.original_cohomology, d.cohomology_match, d.splitting_iso, d.q_correction
        )
        .unwrap();
    }
    let mut out = Output::new(json!({ "operator": rep, "sequence": sr }), plain);
    out.ok = rep.kernel_maps_to_kernel && rep.projection_injective && sr.ok();
    Ok(out)
}

fn insertion(job: &JobSpec) -> Result<Output> {
    let pair = pair_of(job)?;
    let k = opt_u64(job, "degree").unwrap_or(2) as usize;
    let inner = match job.option("inner") {
        Some(s) => NodeSet::parse(s)?,
        None => NodeSet::new(pair.crossed_q.nodes().first().copied()),
    };
    let (cx, module) = match &job.hw {
        Some(hw) => {
            let cx = build_labelled(&pair, hw)?;
            let m = cx.coeff.clone();
            (cx, m)
        }
        None => {
            let m = adjoint_module(&Algebra::levi(pair.rank(), &pair.crossed_p));
            (build_complex(&pair, &m)?, m)
        }
    };
    let e = InsertionPreset::parse(job.option("e").unwrap_or("wedge-inner"))?;
    let f = InsertionPreset::parse(job.option("f").unwrap_or("wedge-inner"))?;
    let adj = adjoint_module(&Algebra::levi(pair.rank(), &pair.crossed_p));
    let e_span = preset_span(&pair, &inner, &module, k, e);
    let f_span = preset_span(&pair, &inner, &adj, 2, f);
    let r = insertion_stability(&cx, k, &e_span, &f_span)?;
    let plain = format!(
        "E = {} (dim {}), F = {} (dim {}), inner crossing {}: stable = {}{}\n",
        e.name(),
        r.e_dim,
        f.name(),
        r.f_dim,
        inner.render(),
        r.stable,
        r.witness.map(|(a, b)| format!(", witness pair ({a}, {b})")).unwrap_or_default()
    );
    Ok(Output::new(json!({ "degree": k, "inner": inner.render(), "e": e, "f": f, "report": r }), plain))
}

fn pathgeom_cmd(job: &JobSpec) -> Result<Output> {
    let w = job.option("w").map(parse_q).transpose()?.unwrap_or_else(|| bgg_core::rational::q(0));
    let k = opt_u64(job, "k").unwrap_or(0) as u32;
    let l = opt_u64(job, "l").unwrap_or(0) as u32;
    let case = PathGeomCase::new(w, k, l);
    let r = pathgeom::report(&case, job.option("validate") == Some("true"))?;
    let crossed = NodeSet::new([1, 2]);
    let mut plain = String::new();
    for (i, (wt, b)) in r.sequence.weights.iter().zip(&r.sequence.bundles).enumerate() {
        writeln!(plain, "W_{i} = {b}  {}", dynkin(wt, &crossed)).unwrap();
    }
    writeln!(plain, "orders {:?}, {}, singular = {} {:?}", r.sequence.orders, r.classification.name(), r.singularity.singular, r.singularity.wall).unwrap();
    writeln!(plain, "tensor bundle {}", r.tensor_bundle.label).unwrap();
    if let Some(e) = &r.engine {
        writeln!(plain, "engine agrees: {}", e.matches).unwrap();
    }
    let ok = r.engine.as_ref().is_none_or(|e| e.matches);
    let mut out = Output::new(to_value(&r), plain);
    out.ok = ok;
    Ok(out)
}

fn selftest(job: &JobSpec) -> Result<Output> {
    let m = match job.option("mutate") {
        Some("flip-action-sign") => Mutation { flip_action_sign: true, ..Mutation::default() },
        Some("killing-scale") => Mutation { killing_scale: true, ..Mutation::default() },
        _ => Mutation::default(),
    };
    let ids: Vec<u8> = match job.option("criteria") {
        Some(s) if !s.is_empty() => s.split(',').map(|x| x.parse::<u8>().map_err(|_| BggError::Parse(format!("criterion {x:?}")))).collect::<Result<_>>()?,
        _ => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut results = Vec::new();
    let mut timings = Vec::new();
    for id in ids {
        let r = run_criterion(id, &m)?;
        timings.push((id, r.elapsed.as_secs_f64(), r.limit_secs));
        results.push(r);
    }
    let report = bgg_core::acceptance::AcceptanceReport { criteria: results };
    let mut out = Output::new(to_value(&report), report.render());
    out.ok = report.ok();
    out.timings = timings;
    Ok(out)
}
