use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use crate::cover::{collide_points, quotient_datum, BranchDatum, CoverError};
use crate::cyclotomic::{CycloMatrix, Cyclotomic};
use crate::dihedral::{
    classify_branch_inertia, dihedral_multiplicity_mu_h, h_range, infinity_ramification_check, DihedralError,
    InertiaClass,
};
use crate::group::{FiniteGroup, GroupElement, GroupSpec};
use crate::hurwitz::{hurwitz_orbit, HurwitzError, OrbitBudget, OrbitCensus};
use crate::local_system::{decompose_direct_image, element_blocks, path_basis_report, LocalSystemError};
use crate::rep::{character_table, CharacterTable, RepError};

use super::files::{build_group, parse_datum_file, parse_group_document, DatumFile, TupleFile};
use super::{CliError, Context, Rendered};

fn input_echo(file: &Path, d: &BranchDatum) -> Value {
    json!({ "file": file.display().to_string(), "datum": DatumFile::from_datum(d) })
}

fn load(ctx: &Context, text: &str) -> Result<BranchDatum, CliError> {
    parse_datum_file(text, ctx.cap)
}

fn load_valid(ctx: &Context, text: &str) -> Result<BranchDatum, CliError> {
    let d = load(ctx, text)?;
    let report = d.validate();
    if report.is_valid() {
        Ok(d)
    } else {
        Err(CliError::Invalid(format!("invalid datum: {report}")))
    }
}

fn table_for(d: &BranchDatum) -> Result<CharacterTable, CliError> {
    character_table(d.group()).map_err(rep_error)
}

fn rep_error(e: RepError) -> CliError {
    match e {
        RepError::UnsupportedGroupKind => {
            CliError::Usage("explicit matrices need a cyclic or dihedral group".into())
        }
        other => CliError::Invalid(other.to_string()),
    }
}

fn local_error(e: LocalSystemError) -> CliError {
    match e {
        LocalSystemError::Rep(r) => rep_error(r),
        LocalSystemError::BaseNotRational(_) | LocalSystemError::BranchDropped(_) => CliError::Usage(e.to_string()),
        other => CliError::Invalid(other.to_string()),
    }
}

fn cover_error(e: CoverError) -> CliError {
    match e {
        CoverError::Invalid(_) | CoverError::NonIntegralGenus | CoverError::NegativeGenus(_) | CoverError::Descent(_) => {
            CliError::Invalid(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn group_name(spec: &GroupSpec) -> String {
    match spec {
        GroupSpec::Cyclic { n } => format!("cyclic({n})"),
        GroupSpec::Dihedral { n } => format!("dihedral({n})"),
        GroupSpec::Permutation { degree, generators } => format!("permutation(degree {degree}, {} generators)", generators.len()),
    }
}

fn value_text(ctx: &Context, c: &Cyclotomic) -> String {
    if ctx.approx {
        let z = c.to_complex();
        format!("{c} (~{:.6}{:+.6}i)", z.re, z.im)
    } else {
        c.to_string()
    }
}

fn value_json(ctx: &Context, c: &Cyclotomic) -> Value {
    if ctx.approx {
        let z = c.to_complex();
        json!({ "exact": c.to_string(), "approx": [z.re, z.im] })
    } else {
        Value::String(c.to_string())
    }
}

fn matrix_json(ctx: &Context, m: &CycloMatrix) -> Value {
    Value::Array(m.rows().map(|r| Value::Array(r.iter().map(|c| value_json(ctx, c)).collect())).collect())
}

fn matrix_text(ctx: &Context, m: &CycloMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|c| value_text(ctx, c)).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces.
fn layout(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn list_or_dash(items: &[String]) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.join(", ")
    }
}

pub(super) fn validate(ctx: &Context, file: &Path, text: &str) -> Result<Rendered, CliError> {
    let d = load(ctx, text)?;
    let report = d.validate();
    let genus = if report.is_valid() { d.riemann_hurwitz_genus().ok() } else { None };
    let mut out = String::new();
    if report.is_valid() {
        out.push_str("valid\n");
        if let Some(g) = genus {
            writeln!(out, "genus: {g}").unwrap();
        }
    } else {
        out.push_str("invalid\n");
        for issue in &report.issues {
            writeln!(out, "  - {issue}").unwrap();
        }
    }
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({ "valid": report.is_valid(), "issues": report.issues, "genus": genus }),
        warnings: vec![],
        failed: !report.is_valid(),
    })
}

pub(super) fn genus(ctx: &Context, file: &Path, text: &str) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    let g = d.riemann_hurwitz_genus().map_err(cover_error)?;
    let fibers = (0..d.branches().len())
        .map(|i| d.fiber_structure(i))
        .collect::<Result<Vec<_>, _>>()
        .map_err(cover_error)?;
    let mut out = format!(
        "group: {} (order {})\nbase genus: {}\ngenus: {g}\n",
        group_name(d.group().kind()),
        d.group().order(),
        d.base_genus()
    );
    let mut rows = vec![vec!["branch".into(), "order".into(), "fiber".into(), "contribution".into(), "inertia".into()]];
    for (b, f) in d.branches().iter().zip(&fibers) {
        rows.push(vec![
            b.label.clone(),
            b.order.to_string(),
            f.fiber_size.to_string(),
            f.ramification_contribution().to_string(),
            f.inertia_labels.join(", "),
        ]);
    }
    if !fibers.is_empty() {
        out.push_str(&layout(&rows));
    }
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({
            "genus": g,
            "group_order": d.group().order(),
            "base_genus": d.base_genus(),
            "fibers": fibers,
        }),
        warnings: vec![],
        failed: false,
    })
}

pub(super) fn cw(ctx: &Context, file: &Path, text: &str) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    let table = table_for(&d)?;
    let dec = decompose_direct_image(&d, &table).map_err(local_error)?;
    let mut warnings = Vec::new();
    let mut path_reports = Vec::new();
    if d.base_genus() == 0 {
        for i in 0..table.len() {
            let r = path_basis_report(&d, &table, i).map_err(local_error)?;
            if !r.consistent {
                warnings.push(format!(
                    "path-basis count for {} is {}, Chevalley-Weil dimension is {}",
                    r.irreducible, r.claimed_dim, r.cw_dim
                ));
            }
            path_reports.push(r);
        }
    }
    let mut rows = vec![vec!["irreducible".into(), "degree".into(), "mu".into(), "type".into(), "support".into()]];
    for s in &dec.summands {
        rows.push(vec![
            s.irreducible.clone(),
            s.rank.to_string(),
            s.mu.to_string(),
            format!("({}, {})", s.hodge_type.0, s.hodge_type.1),
            list_or_dash(&s.support),
        ]);
    }
    let mut out = layout(&rows);
    let sum = dec.weighted_mu_sum();
    writeln!(out, "sum d*mu = {sum} = genus {}", dec.genus).unwrap();
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({
            "genus": dec.genus,
            "weighted_mu_sum": sum,
            "consistent": sum == dec.genus as u64,
            "summands": dec.summands,
            "path_basis": path_reports,
        }),
        warnings,
        failed: false,
    })
}

fn blocks_of(table: &CharacterTable, g: GroupElement) -> Result<Vec<(String, CycloMatrix)>, CliError> {
    element_blocks(table, g).map_err(local_error)
}

fn full_matrix(table: &CharacterTable, g: GroupElement) -> Result<CycloMatrix, CliError> {
    let blocks: Vec<CycloMatrix> = blocks_of(table, g)?.into_iter().map(|(_, m)| m).collect();
    Ok(CycloMatrix::block_diagonal(&blocks))
}

pub(super) fn monodromy(ctx: &Context, file: &Path, text: &str, branch: Option<&str>) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    let g = d.group();
    let table = table_for(&d)?;
    let selected: Vec<usize> = match branch {
        Some(label) => vec![d
            .branch_index(label)
            .ok_or_else(|| CliError::Usage(format!("no branch labelled `{label}`")))?],
        None => (0..d.branches().len()).collect(),
    };
    let mut out = String::new();
    let mut entries = Vec::new();
    for &k in &selected {
        let b = &d.branches()[k];
        writeln!(out, "branch {} ({}):", b.label, g.label(b.monodromy)).unwrap();
        let mut blocks_json = Vec::new();
        for (label, m) in blocks_of(&table, b.monodromy)? {
            writeln!(out, "[{label}]").unwrap();
            out.push_str(&matrix_text(ctx, &m));
            blocks_json.push(json!({ "irreducible": label, "rows": matrix_json(ctx, &m) }));
        }
        entries.push(json!({ "label": b.label, "element": g.label(b.monodromy), "blocks": blocks_json }));
    }
    // Image of the long relation: prod M(h_k) * prod [M(A_j), M(B_j)].
    let size = table.irreducibles().iter().map(|i| i.degree).sum();
    let mut product = CycloMatrix::identity(size);
    for b in d.branches() {
        product = &product * &full_matrix(&table, b.monodromy)?;
    }
    for pair in d.handles().chunks(2) {
        let (a, bb) = (pair[0], pair[1]);
        for x in [a, bb, g.inv(a), g.inv(bb)] {
            product = &product * &full_matrix(&table, x)?;
        }
    }
    let relation_holds = product.is_identity();
    writeln!(out, "long relation maps to identity: {relation_holds}").unwrap();
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({ "branches": entries, "relation_holds": relation_holds }),
        warnings: vec![],
        failed: !relation_holds,
    })
}

pub(super) fn support(ctx: &Context, file: &Path, text: &str) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    let table = table_for(&d)?;
    let dec = decompose_direct_image(&d, &table).map_err(local_error)?;
    let mut rows = vec![vec!["irreducible".to_string(), "support".to_string()]];
    let mut items = Vec::new();
    for s in &dec.summands {
        rows.push(vec![s.irreducible.clone(), list_or_dash(&s.support)]);
        items.push(json!({ "irreducible": s.irreducible, "support": s.support }));
    }
    Ok(Rendered {
        input: input_echo(file, &d),
        text: layout(&rows),
        json: json!({ "supports": items }),
        warnings: vec![],
        failed: false,
    })
}

fn parse_generators(g: &FiniteGroup, text: &str) -> Result<Vec<GroupElement>, CliError> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    out.push(current);
    out.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| g.parse_element(s.trim()).map_err(|e| CliError::Usage(format!("element `{}`: {e}", s.trim()))))
        .collect()
}

pub(super) fn quotient(ctx: &Context, file: &Path, text: &str, normal: &str) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    let g = d.group();
    let gens = parse_generators(g, normal)?;
    let sub = g.subgroup_generated(&gens);
    if !sub.is_normal {
        return Err(CliError::Usage(format!("subgroup generated by {normal} is not normal")));
    }
    let q = quotient_datum(&d, &sub).map_err(cover_error)?;
    let r = &q.report;
    let datum_file = DatumFile::from_datum(&q.datum);
    let mut out = format!(
        "normal subgroup order: {}\nquotient group: {} (order {})\ngenus: {} -> {}\n",
        r.normal_order,
        group_name(q.datum.group().kind()),
        r.quotient_order,
        r.genus,
        r.quotient_genus
    );
    writeln!(out, "dropped (unramified): {}", list_or_dash(&r.dropped)).unwrap();
    writeln!(out, "retained: {}", list_or_dash(&r.retained)).unwrap();
    for c in &r.order_changes {
        writeln!(out, "order change: {} {} -> {}", c.label, c.from, c.to).unwrap();
    }
    out.push_str("quotient datum:\n");
    out.push_str(&datum_file.to_json());
    out.push('\n');
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({ "report": r, "datum": datum_file }),
        warnings: vec![],
        failed: false,
    })
}

pub(super) fn collide(ctx: &Context, file: &Path, text: &str, i: usize, j: usize) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    if i == 0 || j == 0 {
        return Err(CliError::Usage("branch positions are 1-based".into()));
    }
    if j != i + 1 {
        return Err(CliError::Usage(format!("only adjacent branches can collide (got {i} and {j})")));
    }
    let merged = collide_points(&d, i - 1, j - 1).map_err(cover_error)?;
    let (left, right) = (&d.branches()[i - 1], &d.branches()[j - 1]);
    let product = d.group().mul(left.monodromy, right.monodromy);
    let mut out = if product == d.group().identity() {
        format!("merged {} and {}: monodromy is trivial, branch dropped\n", left.label, right.label)
    } else {
        format!(
            "merged {} and {} into {}+{} ({}, order {})\n",
            left.label,
            right.label,
            left.label,
            right.label,
            d.group().label(product),
            d.group().element_order(product)
        )
    };
    writeln!(out, "group: {} (order {})", group_name(merged.group().kind()), merged.group().order()).unwrap();
    let datum_file = DatumFile::from_datum(&merged);
    out.push_str(&datum_file.to_json());
    out.push('\n');
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({ "merged_monodromy": d.group().label(product), "datum": datum_file }),
        warnings: vec![],
        failed: false,
    })
}

fn dihedral_error(e: DihedralError) -> CliError {
    match e {
        DihedralError::NotDihedral | DihedralError::HOutOfRange { .. } => CliError::Usage(e.to_string()),
        DihedralError::LocalSystem(l) => local_error(l),
        other => CliError::Invalid(other.to_string()),
    }
}

pub(super) fn dihedral_analyze(ctx: &Context, file: &Path, text: &str) -> Result<Rendered, CliError> {
    let d = load_valid(ctx, text)?;
    let analysis = classify_branch_inertia(&d).map_err(dihedral_error)?;
    let table = table_for(&d)?;
    let p = &analysis.profile;
    let mut out = format!("n: {}\nreflection branches (l): {}\n", p.n, p.reflection_count);
    match p.reflection_exponent {
        Some(k) => writeln!(out, "reflection representative: {}", d.group().label(d.group().dihedral_element(k as i64, true).unwrap())).unwrap(),
        None if p.reflection_count > 0 => out.push_str("reflection representative: mixed\n"),
        None => {}
    }
    let exps: Vec<String> = p.rotation_exponents.iter().map(ToString::to_string).collect();
    writeln!(out, "rotation exponents: {}", list_or_dash(&exps)).unwrap();
    if let Some(parity) = p.parity_class {
        writeln!(out, "reflection parity: {}", serde_json::to_value(parity).unwrap().as_str().unwrap()).unwrap();
    }
    let mut rows = vec![vec!["branch".to_string(), "type".to_string()]];
    for b in &analysis.branches {
        let t = match b.class {
            InertiaClass::Identity => "identity".to_string(),
            InertiaClass::Rotation { exponent } => format!("rotation (d = {exponent})"),
            InertiaClass::Reflection { exponent } => format!("reflection (k = {exponent})"),
            InertiaClass::CentralInvolution => "central involution".to_string(),
        };
        rows.push(vec![b.label.clone(), t]);
    }
    out.push_str(&layout(&rows));
    let mut mus = Vec::new();
    for h in h_range(p.n) {
        let mu = dihedral_multiplicity_mu_h(&d, &table, h).map_err(dihedral_error)?;
        writeln!(out, "mu_{h} = {mu}").unwrap();
        mus.push(json!({ "h": h, "mu": mu }));
    }
    let infinity = match infinity_ramification_check(p) {
        Ok(v) => {
            writeln!(out, "unramified at infinity criterion: {v}").unwrap();
            Value::Bool(v)
        }
        Err(DihedralError::AssumptionViolated) => {
            out.push_str("unramified at infinity criterion: not applicable (mixed reflection representatives)\n");
            Value::Null
        }
        Err(e) => return Err(dihedral_error(e)),
    };
    Ok(Rendered {
        input: input_echo(file, &d),
        text: out,
        json: json!({ "profile": p, "branches": analysis.branches, "mu_h": mus, "infinity_criterion": infinity }),
        warnings: vec![],
        failed: false,
    })
}

fn census_text(c: &OrbitCensus) -> String {
    let mut out = format!("orbit size: {}\ncomplete: {}\n", c.size, c.complete);
    let classes: Vec<String> = c.fingerprint.classes.iter().map(|(r, n)| format!("{r} x{n}")).collect();
    writeln!(out, "classes: {}", classes.join(", ")).unwrap();
    match c.fingerprint.genus {
        Some(g) => writeln!(out, "genus: {g}").unwrap(),
        None => out.push_str("genus: undefined\n"),
    }
    if let Some(mu) = &c.fingerprint.mu {
        let mu: Vec<String> = mu.iter().map(ToString::to_string).collect();
        writeln!(out, "mu: ({})", mu.join(", ")).unwrap();
    }
    writeln!(out, "fingerprint constant: {}", c.fingerprint_constant).unwrap();
    writeln!(out, "representative: ({})", c.representative.join(", ")).unwrap();
    out
}

pub(super) fn hurwitz_orbits(
    ctx: &Context,
    file: &Path,
    text: &str,
    max_orbit: usize,
    max_group: usize,
) -> Result<Rendered, CliError> {
    let tf = TupleFile::parse(text)?;
    let t = tf.to_tuple(ctx.cap)?;
    let table = if t.group().order() <= max_group { Some(character_table(t.group()).map_err(rep_error)?) } else { None };
    let budget = OrbitBudget { max_orbit, max_group, ..OrbitBudget::default() };
    let input = json!({ "file": file.display().to_string(), "entries": t.labels() });
    match hurwitz_orbit(&t, table.as_ref(), budget) {
        Ok(c) => Ok(Rendered {
            input,
            text: census_text(&c),
            json: serde_json::to_value(&c).unwrap(),
            warnings: vec![],
            failed: !c.fingerprint_constant,
        }),
        Err(HurwitzError::OrbitBudgetExceeded { max, partial }) => Ok(Rendered {
            input,
            text: census_text(&partial),
            json: serde_json::to_value(&*partial).unwrap(),
            warnings: vec![format!("orbit exceeded {max} tuples; census is partial")],
            failed: true,
        }),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

pub(super) fn char_table(ctx: &Context, file: &Path, text: &str) -> Result<Rendered, CliError> {
    let spec = parse_group_document(text)?;
    let g = build_group(&spec, ctx.cap)?;
    let table = character_table(&g).map_err(rep_error)?;
    let classes = table.classes();
    let mut rows = vec![
        std::iter::once("class".to_string()).chain(classes.iter().map(|c| g.label(c.representative).to_string())).collect::<Vec<_>>(),
        std::iter::once("size".to_string()).chain(classes.iter().map(|c| c.size().to_string())).collect(),
        std::iter::once("order".to_string())
            .chain(classes.iter().map(|c| g.element_order(c.representative).to_string()))
            .collect(),
    ];
    let mut irreducibles = Vec::new();
    for (i, irr) in table.irreducibles().iter().enumerate() {
        rows.push(std::iter::once(irr.label.clone()).chain(table.row(i).iter().map(|v| value_text(ctx, v))).collect());
        irreducibles.push(json!({
            "label": irr.label,
            "degree": irr.degree,
            "values": table.row(i).iter().map(|v| value_json(ctx, v)).collect::<Vec<_>>(),
        }));
    }
    let class_json: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "representative": g.label(c.representative),
                "size": c.size(),
                "order": g.element_order(c.representative),
            })
        })
        .collect();
    let out = format!("group: {} (order {})\n{}", group_name(&spec), g.order(), layout(&rows));
    Ok(Rendered {
        input: json!({ "file": file.display().to_string(), "group": spec }),
        text: out,
        json: json!({ "method": table.method(), "classes": class_json, "irreducibles": irreducibles }),
        warnings: vec![],
        failed: false,
    })
}
