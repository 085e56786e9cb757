//! The verification pipeline: per-case checks against a versioned
//! expectations file, rendered as `CHECK <id> <status> expected=… computed=…`.

use super::cases::{case_spec, CaseSpec, GeneratorSet};
use super::dirichlet::{dirichlet_char, gauss_sum, legendre};
use super::exclusion::{exclusion_config, format_pairs, parse_pairs, run_exclusion, Pair};
use super::head::head_char_expansion;
use super::structure::{build_class_structure, fricke_stabilizer, singular_cusps, CASE_IDS};
use super::table::{classify_powers, load_char_table, CharTable};
use super::MoonshineError;
use crate::exact::{parse_cyc, CycNum};
use crate::modgroup::{
    genus, orbits_on, parse_generator, reduce_generators, star_k, star_k_conjugated,
    star_k_randomized, Psl2pElt, Psl2pGroup,
};
use crate::qseries::{parse_expr, Expr, QSeries, DEFAULT_TRUNC};
use num_complex::Complex64;
use rand::SeedableRng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

/// Sample points for the numerical invariance check (Im τ ≥ 0.8).
pub const SAMPLE_POINTS: [(f64, f64); 5] = [
    (0.1, 0.9),
    (-0.3, 1.0),
    (0.37, 0.85),
    (0.05, 1.2),
    (-0.45, 0.8),
];

pub const DEFAULT_NUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INFO")]
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
}

impl Check {
    fn new(
        id: impl Into<String>,
        ok: bool,
        expected: impl Into<String>,
        computed: impl Into<String>,
    ) -> Check {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check {
            id: id.into(),
            status,
            expected: compact(expected.into()),
            computed: compact(computed.into()),
        }
    }

    fn info(
        id: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
    ) -> Check {
        Check {
            id: id.into(),
            status: Status::Info,
            expected: compact(expected.into()),
            computed: compact(computed.into()),
        }
    }
}

fn compact(s: String) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} expected={} computed={}",
            self.id, self.status, self.expected, self.computed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub case_id: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn render(&self) -> String {
        let mut s = format!("CASE {}\n", self.case_id);
        for c in &self.checks {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseExpect {
    pub quotient: String,
    pub order: usize,
    pub genus: i64,
    pub singular_orbits: usize,
    pub pairs: BTreeSet<Pair>,
}

/// Contents of the expectations file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expectations {
    pub cases: BTreeMap<String, CaseExpect>,
    /// label → coefficients of q¹, q², …
    pub series: BTreeMap<String, Vec<CycNum>>,
}

impl Expectations {
    pub fn load(path: &Path) -> Result<Expectations, MoonshineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MoonshineError::Io(format!("{}: {e}", path.display())))?;
        Expectations::parse(&text)
    }

    /// `CASE <id> QUOTIENT <name> ORDER <n> GENUS <g> SINGULAR_ORBITS <k> PAIRS <list>`
    /// and `SERIES <label> <c1> ; <c2> ; …`.
    pub fn parse(text: &str) -> Result<Expectations, MoonshineError> {
        let mut out = Expectations::default();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| MoonshineError::Expectations { line: ln, msg };
            let f: Vec<&str> = line.split_whitespace().collect();
            match f[0] {
                "CASE" => {
                    let keys = ["QUOTIENT", "ORDER", "GENUS", "SINGULAR_ORBITS", "PAIRS"];
                    if f.len() < 12 || (0..5).any(|i| f[2 + 2 * i] != keys[i]) {
                        return Err(err("expected CASE <id> QUOTIENT .. ORDER .. GENUS .. SINGULAR_ORBITS .. PAIRS ..".into()));
                    }
                    let num = |s: &str| {
                        s.parse::<i64>()
                            .map_err(|_| err(format!("expected an integer, got '{s}'")))
                    };
                    let pairs_text = f[11..].join("");
                    let pairs = parse_pairs(&pairs_text)
                        .ok_or_else(|| err(format!("bad pair list '{pairs_text}'")))?;
                    out.cases.insert(
                        f[1].to_string(),
                        CaseExpect {
                            quotient: f[3].to_string(),
                            order: num(f[5])? as usize,
                            genus: num(f[7])?,
                            singular_orbits: num(f[9])? as usize,
                            pairs,
                        },
                    );
                }
                "SERIES" => {
                    if f.len() < 3 {
                        return Err(err("expected SERIES <label> <coefficients>".into()));
                    }
                    let rest = line.splitn(3, char::is_whitespace).nth(2).unwrap_or("");
                    let coeffs = rest
                        .split(';')
                        .map(|c| {
                            parse_cyc(c)
                                .map_err(|e| err(format!("bad coefficient '{}': {e}", c.trim())))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    out.series.insert(f[1].to_string(), coeffs);
                }
                other => return Err(err(format!("unknown record '{other}'"))),
            }
        }
        Ok(out)
    }
}

/// Character tables by group name; files that failed to load are listed with the reason.
#[derive(Debug, Clone, Default)]
pub struct TableSet {
    pub tables: BTreeMap<String, CharTable>,
    pub missing: BTreeMap<String, String>,
    pub invalid: BTreeMap<String, String>,
}

pub const TABLE_FILES: [(&str, &str); 4] = [
    ("HN", "HN.tbl"),
    ("He", "He.tbl"),
    ("L3(3)", "L3_3.tbl"),
    ("M12", "M12.tbl"),
];

pub fn load_tables(dir: &Path) -> TableSet {
    let mut set = TableSet::default();
    for (group, file) in TABLE_FILES {
        let path = dir.join(file);
        if !path.exists() {
            set.missing
                .insert(group.to_string(), format!("{} not found", path.display()));
            continue;
        }
        match load_char_table(&path) {
            Ok(t) => {
                set.tables.insert(group.to_string(), t);
            }
            Err(e) => {
                set.invalid.insert(group.to_string(), e.to_string());
            }
        }
    }
    set
}

impl TableSet {
    pub fn get(&self, group: &str) -> Option<&CharTable> {
        self.tables.get(group)
    }

    fn why_absent(&self, group: &str) -> String {
        self.missing
            .get(group)
            .or_else(|| self.invalid.get(group))
            .cloned()
            .unwrap_or_else(|| "not loaded".into())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub num_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            num_tol: DEFAULT_NUM_TOL,
        }
    }
}

/// `$MOONSHINE_DATA`, else the data directory shipped with the crate.
pub fn default_data_dir() -> PathBuf {
    match std::env::var_os("MOONSHINE_DATA") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")),
    }
}

fn show_coeffs(v: &[CycNum]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Coefficients of q^-1, q^0, q¹ … q^n.
fn head_of(s: &QSeries, n: i64) -> Vec<CycNum> {
    (-1..=n).map(|k| s.coeff_int(k)).collect()
}

fn expected_head(tail: &[CycNum]) -> Vec<CycNum> {
    let mut v = vec![CycNum::one(), CycNum::zero()];
    v.extend(tail.iter().cloned());
    v
}

fn num_err(e: impl fmt::Display) -> String {
    format!("error:{e}")
}

fn invariance_error(
    expr: &Expr,
    gens: &[crate::modgroup::GroupElt],
) -> Result<f64, MoonshineError> {
    let mut worst: f64 = 0.0;
    for g in gens {
        for (x, y) in SAMPLE_POINTS {
            let tau = Complex64::new(x, y);
            let d = (expr.eval(g.act(tau)?)? - expr.eval(tau)?).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

fn diagonal_count(g: &Psl2pGroup) -> usize {
    let p = g.p();
    (1..p)
        .map(|a| Psl2pElt::new(p, [a, 0, 0, crate::modgroup::inv_mod_u(a, p)]))
        .collect::<BTreeSet<_>>()
        .iter()
        .filter(|d| g.contains(d))
        .count()
}

fn group_checks(
    spec: &CaseSpec,
    set: &GeneratorSet,
    exp: Option<&super::verify::CaseExpect>,
    stabilizer: &Psl2pGroup,
    singular: &[crate::modgroup::Cusp],
    out: &mut Vec<Check>,
) -> Result<(), MoonshineError> {
    let p = spec.p;
    let sfx = set.label;
    let g = set.group(p)?;
    let name = g.identify().short();
    match exp {
        Some(e) => out.push(Check::new(
            format!("quotient_{}{sfx}", e.quotient),
            name == e.quotient && g.order() == e.order,
            format!("{} order {}", e.quotient, e.order),
            format!("{name} order {}", g.order()),
        )),
        None => out.push(Check::info(
            format!("quotient{sfx}"),
            "-",
            format!("{name} order {}", g.order()),
        )),
    }
    if !set.relations.is_empty() {
        let rels = set.check_relations(p)?;
        let computed: Vec<String> = rels
            .iter()
            .map(|r| format!("{}:{}", r.relation, r.order))
            .collect();
        out.push(Check::new(
            format!("relations{sfx}"),
            rels.iter().all(|r| r.holds),
            "all_orders_1",
            computed.join(","),
        ));
    }
    let preserved = set.reduced(p)?.iter().all(|x| stabilizer.contains(x));
    out.push(Check::new(
        format!("labels_preserved{sfx}"),
        preserved,
        "true",
        preserved.to_string(),
    ));

    let orbits = orbits_on(&g, singular);
    let sizes: Vec<String> = orbits.iter().map(|o| o.len().to_string()).collect();
    let computed = format!(
        "{} orbits [{}] of {} singular cusps",
        orbits.len(),
        sizes.join(","),
        singular.len()
    );
    match exp {
        // the 13 cases carry an open question on the orbit census
        Some(e) if p == 13 => out.push(Check::info(
            format!("singular_orbits{sfx}"),
            e.singular_orbits.to_string(),
            computed,
        )),
        Some(e) => out.push(Check::new(
            format!("singular_orbits{sfx}"),
            orbits.len() == e.singular_orbits,
            e.singular_orbits.to_string(),
            computed,
        )),
        None => out.push(Check::info(format!("singular_orbits{sfx}"), "-", computed)),
    }

    let gd = genus(&g)?;
    match exp {
        Some(e) => out.push(Check::new(
            format!("genus{sfx}"),
            gd.genus == e.genus,
            format!("g={}", e.genus),
            gd.to_string(),
        )),
        None => out.push(Check::info(format!("genus{sfx}"), "-", gd.to_string())),
    }
    if set.gens.iter().any(|x| x.starts_with("delta_")) {
        let n = diagonal_count(&g);
        let want = (p as usize - 1) / 2;
        out.push(Check::new(
            format!("diagonal{sfx}"),
            n == want,
            want.to_string(),
            n.to_string(),
        ));
    }
    Ok(())
}

/// Computed series per hauptmodul label: from the eta-quotient when there is one,
/// else from the head-character scheme (None when the table is absent).
fn case_series(
    spec: &CaseSpec,
    tables: &TableSet,
) -> Result<BTreeMap<&'static str, Option<QSeries>>, MoonshineError> {
    let mut out = BTreeMap::new();
    for h in &spec.hauptmoduls {
        let s = match (h.dsl, h.head) {
            (Some(d), _) => Some(parse_expr(d)?.series(DEFAULT_TRUNC)?),
            (None, Some((scheme, class))) => match tables.get(scheme.group()) {
                Some(t) => Some(head_char_expansion(t, class, scheme)?),
                None => None,
            },
            (None, None) => None,
        };
        out.insert(h.label, s);
    }
    Ok(out)
}

fn series_by_label(label: &str, tables: &TableSet) -> Result<Option<QSeries>, MoonshineError> {
    for id in CASE_IDS {
        let spec = case_spec(id)?;
        if spec.hauptmoduls.iter().any(|h| h.label == label) {
            return Ok(case_series(&spec, tables)?.remove(label).flatten());
        }
    }
    Ok(None)
}

pub fn verify_case(
    case_id: &str,
    exp: &Expectations,
    tables: &TableSet,
    opts: &VerifyOptions,
) -> Result<Report, MoonshineError> {
    let spec = case_spec(case_id)?;
    let p = spec.p;
    let cs = build_class_structure(case_id)?;
    let case_exp = exp.cases.get(case_id);
    let mut checks = Vec::new();

    // series
    let series = case_series(&spec, tables)?;
    for h in &spec.hauptmoduls {
        let s = &series[h.label];
        if let Some(want) = exp.series.get(h.label) {
            let n = want.len() as i64;
            match s {
                Some(s) => {
                    let got = head_of(s, n);
                    checks.push(Check::new(
                        format!("series_{}", h.label),
                        got == expected_head(want),
                        show_coeffs(&expected_head(want)),
                        show_coeffs(&got),
                    ));
                }
                None => checks.push(Check::info(
                    format!("series_{}", h.label),
                    show_coeffs(&expected_head(want)),
                    format!(
                        "skipped:{}",
                        h.head
                            .map_or("no source".into(), |(sc, _)| tables.why_absent(sc.group()))
                    ),
                )),
            }
        }
        if let Some((src, k)) = h.galois_of {
            let other = match series.get(src) {
                Some(x) => x.clone(),
                None => series_by_label(src, tables)?,
            };
            if let (Some(a), Some(b)) = (s, other) {
                let want = head_of(&b.galois(k)?, 5);
                let got = head_of(a, 5);
                checks.push(Check::new(
                    format!("galois_{}", h.label),
                    got == want,
                    show_coeffs(&want),
                    show_coeffs(&got),
                ));
            }
        }
        if let (Some(_), Some((scheme, class))) = (h.dsl, h.head) {
            let id = format!("head_{class}");
            let s = s.as_ref().expect("eta-quotient series is always computed");
            match tables.get(scheme.group()) {
                Some(t) => {
                    let hs = head_char_expansion(t, class, scheme)?;
                    let (want, got) = (head_of(s, 5), head_of(&hs, 5));
                    checks.push(Check::new(
                        id,
                        want == got,
                        show_coeffs(&want),
                        show_coeffs(&got),
                    ));
                }
                None => checks.push(Check::info(
                    id,
                    show_coeffs(&head_of(s, 5)),
                    format!("skipped:{}", tables.why_absent(scheme.group())),
                )),
            }
        }
        if let Some(d) = h.dsl {
            let expr = parse_expr(d)?;
            let gens = h
                .invariance
                .iter()
                .map(|g| parse_generator(g, Some(p)))
                .collect::<Result<Vec<_>, _>>()?;
            let id = format!("invariance_{}", h.label);
            let want = format!("max<{:e}", opts.num_tol);
            match invariance_error(&expr, &gens) {
                Ok(e) => checks.push(Check::new(
                    id,
                    e < opts.num_tol,
                    want,
                    format!("max={e:.0e}"),
                )),
                Err(e) => checks.push(Check::new(id, false, want, num_err(e))),
            }
        }
    }

    // groups
    let stabilizer = fricke_stabilizer(&cs)?;
    let singular = singular_cusps(&cs);
    if cs.is_degenerate() {
        checks.push(Check::info(
            "singular_cusps",
            "-",
            "constant GMF, no singular cusps",
        ));
    }
    for set in &spec.generator_sets {
        group_checks(&spec, set, case_exp, &stabilizer, &singular, &mut checks)?;
    }

    // exclusion replay
    if let Ok(cfg) = exclusion_config(case_id) {
        let r = run_exclusion(&cs, &cfg)?;
        match case_exp {
            Some(e) => checks.push(Check::new(
                "pairs",
                r.pairs == e.pairs,
                format_pairs(&e.pairs),
                format_pairs(&r.pairs),
            )),
            None => checks.push(Check::info("pairs", "-", format_pairs(&r.pairs))),
        }
    }

    // *k from the source case
    if let Some((src, k)) = spec.star_from {
        let src_spec = case_spec(src)?;
        let src_set = &src_spec.generator_sets[0];
        let target = spec.generator_sets[0].group(p)?;
        let image = |gens: Vec<crate::modgroup::GroupElt>| -> Result<Psl2pGroup, MoonshineError> {
            let red = reduce_generators(&gens, p)?;
            Ok(Psl2pGroup::generate(p, &red)?)
        };
        let plain = image(star_k(&src_set.elements(p)?, k, p)?)? == target;
        let tilde_src = src_spec.hauptmoduls[0]
            .invariance
            .iter()
            .map(|g| parse_generator(g, Some(p)))
            .collect::<Result<Vec<_>, _>>()?;
        // compare on the θ side: conjugate the target generators too
        let target_tilde = spec.hauptmoduls[0]
            .invariance
            .iter()
            .map(|g| parse_generator(g, Some(p)).map(|x| x.unconjugate_by_theta(p)))
            .collect::<Result<Vec<_>, _>>()?;
        let mapped: Vec<_> = star_k_conjugated(&tilde_src, k, p)?
            .iter()
            .map(|x| x.unconjugate_by_theta(p))
            .collect();
        let tilde = image(mapped)? == target && image(target_tilde)? == target;
        let mut rng = rand::rngs::StdRng::seed_from_u64(1000 * p + k.unsigned_abs());
        let mut agree = 0;
        for _ in 0..20 {
            if image(star_k_randomized(&src_set.elements(p)?, k, p, &mut rng)?)? == target {
                agree += 1;
            }
        }
        checks.push(Check::new(
            format!("star_k{k}"),
            plain && tilde && agree == 20,
            format!("image_of_{src}=group_of_{case_id};20/20"),
            format!("plain={plain};theta={tilde};{agree}/20"),
        ));
    }

    Ok(Report {
        case_id: case_id.to_string(),
        checks,
    })
}

/// Checks that belong to no single case.
pub fn verify_common(tables: &TableSet) -> Result<Report, MoonshineError> {
    let mut checks = Vec::new();

    let j = Expr::j().series(3)?;
    let want = [
        CycNum::one(),
        CycNum::zero(),
        CycNum::from_int(196884),
        CycNum::from_int(21493760),
    ];
    let got = head_of(&j, 2);
    checks.push(Check::new(
        "series_J",
        got == want,
        show_coeffs(&want),
        show_coeffs(&got),
    ));

    let i = CycNum::root_of_unity(4, 1);
    let chi = dirichlet_char(13, 4, &i)?;
    let blocks = chi.blocks();
    let want_blocks = vec![
        vec![1, 3, 9],
        vec![2, 6, 5],
        vec![4, 12, 10],
        vec![8, 11, 7],
    ];
    let show = |b: &Vec<Vec<u64>>| {
        b.iter()
            .map(|v| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    };
    let sorted = |mut b: Vec<Vec<u64>>| {
        b.iter_mut().for_each(|v| v.sort());
        b
    };
    let (wb, gb) = (sorted(want_blocks.clone()), sorted(blocks.clone()));
    checks.push(Check::new(
        "chi4_13",
        wb == gb && chi.value(2) == i,
        show(&wb),
        show(&gb),
    ));

    let bar = dirichlet_char(13, 4, &-&i)?;
    let q = chi.quotient(&bar)?;
    let ok = (1..13).all(|a| q[a as usize] == CycNum::from_int(legendre(a, 13) as i64));
    checks.push(Check::new(
        "chi4_quotient_legendre",
        ok,
        "legendre_13",
        if ok { "legendre_13" } else { "mismatch" },
    ));

    let mut sq = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let g = gauss_sum(p)?;
        sq.push(&g * &g);
    }
    let want: Vec<CycNum> = [5, -7, -11, 13]
        .iter()
        .map(|&n| CycNum::from_int(n))
        .collect();
    checks.push(Check::new(
        "gauss_sums",
        sq == want,
        show_coeffs(&want),
        show_coeffs(&sq),
    ));

    for p in [5u64, 7, 11, 13] {
        let d = parse_generator(&format!("delta_{p}"), None)?.reduce_mod_p(p)?;
        let g = Psl2pGroup::generate(p, &[d])?;
        let want = (p as usize - 1) / 2;
        let ok = d.order() as usize == want && diagonal_count(&g) == want && g.order() == want;
        checks.push(Check::new(
            format!("delta_{p}"),
            ok,
            format!("order {want}, full diagonal image"),
            format!(
                "order {}, {} of {want} diagonal classes, |group| {}",
                d.order(),
                diagonal_count(&g),
                g.order()
            ),
        ));
    }

    for p in [5u64, 7, 11, 13] {
        let gd = genus(&Psl2pGroup::generate(p, &[])?)?;
        let want = 1 + (p * p - 1) as i64 * (p as i64 - 6) / 24;
        checks.push(Check::new(
            format!("genus_X{p}"),
            gd.genus == want,
            format!("g={want}"),
            gd.to_string(),
        ));
    }

    for (group, _) in super::verify::TABLE_FILES {
        let id = format!("table_{group}");
        match (tables.get(group), tables.invalid.get(group)) {
            (Some(t), _) => checks.push(Check::new(
                id,
                true,
                "valid",
                format!(
                    "{} classes, {} irreducibles",
                    t.classes.len(),
                    t.irreducibles.len()
                ),
            )),
            (None, Some(e)) => checks.push(Check::new(id, false, "valid", e.clone())),
            (None, None) => checks.push(Check::info(
                id,
                "valid",
                format!("skipped:{}", tables.why_absent(group)),
            )),
        }
    }

    let powers: [(&str, &str, &[&[u64]]); 3] = [
        ("HN", "5C", &[&[1, 4], &[2, 3]]),
        ("He", "7E", &[&[1, 2, 4], &[3, 5, 6]]),
        (
            "L3(3)",
            "13A",
            &[&[1, 3, 9], &[2, 5, 6], &[4, 10, 12], &[7, 8, 11]],
        ),
    ];
    for (group, class, want) in powers {
        let id = format!("powers_{}_{class}", group.replace(['(', ')'], ""));
        let want: BTreeSet<Vec<u64>> = want.iter().map(|b| b.to_vec()).collect();
        let want_s = want
            .iter()
            .map(|b| format!("{b:?}"))
            .collect::<Vec<_>>()
            .join("");
        match tables.get(group) {
            Some(t) => {
                let pc = classify_powers(t, class)?;
                let got: BTreeSet<Vec<u64>> = pc.blocks.iter().cloned().collect();
                let got_s = got
                    .iter()
                    .map(|b| format!("{b:?}"))
                    .collect::<Vec<_>>()
                    .join("");
                checks.push(Check::new(
                    id,
                    got == want,
                    format!("N={} {want_s}", want.len()),
                    format!("N={} {got_s}", pc.n),
                ));
            }
            None => checks.push(Check::info(
                id,
                want_s,
                format!("skipped:{}", tables.why_absent(group)),
            )),
        }
    }

    Ok(Report {
        case_id: "common".into(),
        checks,
    })
}

/// Common checks, then every case in canonical order (computed in parallel).
pub fn verify_all(
    exp: &Expectations,
    tables: &TableSet,
    opts: &VerifyOptions,
) -> Result<Vec<Report>, MoonshineError> {
    let mut out = vec![verify_common(tables)?];
    let results: Vec<Result<Report, MoonshineError>> = std::thread::scope(|s| {
        let handles: Vec<_> = CASE_IDS
            .iter()
            .map(|id| s.spawn(move || verify_case(id, exp, tables, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    for r in results {
        out.push(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_grammar() {
        let e = Expectations::parse(
            "# comment\nCASE 5i QUOTIENT D3 ORDER 6 GENUS 0 SINGULAR_ORBITS 1 PAIRS (1,2),(4,3)\n\
             CASE 5ii QUOTIENT D3 ORDER 6 GENUS 0 SINGULAR_ORBITS 1 PAIRS -\n\
             SERIES 25b 3/2 - 5/2*sqrt5 ; -10\n",
        )
        .unwrap();
        assert_eq!(e.cases["5i"].pairs.len(), 2);
        assert!(e.cases["5ii"].pairs.is_empty());
        assert_eq!(e.series["25b"][1], CycNum::from_int(-10));
        assert!(Expectations::parse("CASE 5i QUOTIENT D3").is_err());
        assert!(Expectations::parse("SERIES x 1 ; 2+").is_err());
        assert!(Expectations::parse("BOGUS").is_err());
    }

    #[test]
    fn report_rendering() {
        let r = Report {
            case_id: "x".into(),
            checks: vec![
                Check::new("a", true, "1 + 2", "3"),
                Check::info("b", "-", "?"),
            ],
        };
        assert_eq!(
            r.render(),
            "CASE x\nCHECK a PASS expected=1+2 computed=3\nCHECK b INFO expected=- computed=?\n"
        );
        assert!(r.passed());
    }

    #[test]
    fn missing_tables_give_info() {
        let t = load_tables(Path::new("/nonexistent"));
        assert_eq!(t.missing.len(), 4);
        let r = verify_common(&t).unwrap();
        assert!(r.passed());
        assert_eq!(r.get("table_HN").unwrap().status, Status::Info);
    }
}
