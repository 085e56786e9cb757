//! Acceptance suite: one line per criterion, `CRITERION <n> <PASS|FAIL|INFO> <summary>`,
//! followed by indented detail lines.
//!
//! Expected values are written out literally here and computed through the
//! library directly, not read back from data/expectations.txt.
//!
//! Two criteria are red and stay red. They print FAIL. The process still exits 0
//! only while the computed values equal the recorded discrepancy exactly, so any
//! drift (or a fix) shows up:
//!   5: the 11A/11B q⁵ coefficients carry the opposite sign of i√11.
//!   8: every 13rX fixing group has genus 3 (mu=91 e2=3 e3=4 einf=7).

use irrmoon::exact::{parse_cyc, CycNum};
use irrmoon::modgroup::{
    builtin, genus, orbits_on, parse_generator, reduce_generators, star_k, star_k_conjugated,
    star_k_randomized, GroupElt, Psl2pGroup,
};
use irrmoon::moonshine::{
    build_class_structure, case_spec, default_data_dir, dirichlet_char, exclusion_config,
    gauss_sum, head_char_expansion, legendre, load_tables, run_exclusion, singular_cusps,
    verify::SAMPLE_POINTS, Scheme, CASE_IDS,
};
use irrmoon::qseries::{parse_expr, QSeries, DEFAULT_TRUNC};
use num_complex::Complex64;
use rand::SeedableRng;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

type Res<T> = Result<T, Box<dyn std::error::Error>>;

const NUM_TOL: f64 = 1e-6;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum St {
    Pass,
    Fail,
    Info,
}

struct Outcome {
    status: St,
    summary: String,
    details: Vec<String>,
    /// FAIL whose computed values equal the recorded discrepancy
    known_red: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            status: St::Pass,
            summary: String::new(),
            details: Vec::new(),
            known_red: false,
        }
    }

    fn item(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details
            .push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        if !ok {
            self.status = St::Fail;
        }
    }

    fn info(&mut self, what: impl Into<String>) {
        self.details.push(format!("info {}", what.into()));
    }
}

fn cyc(s: &str) -> CycNum {
    parse_cyc(s).unwrap_or_else(|e| panic!("bad literal {s}: {e}"))
}

fn series(dsl: &str) -> Res<QSeries> {
    Ok(parse_expr(dsl)?.series(DEFAULT_TRUNC)?)
}

/// (exponent, matches, computed) for q⁻¹ + 0 + c₁q + … with the given cᵢ.
fn matches_head(s: &QSeries, want: &[&str]) -> Vec<(i64, bool, CycNum)> {
    let mut out = vec![(-1, s.coeff_int(-1).is_one(), s.coeff_int(-1))];
    out.push((0, s.coeff_int(0).is_zero(), s.coeff_int(0)));
    for (k, w) in want.iter().enumerate() {
        let n = k as i64 + 1;
        let c = s.coeff_int(n);
        out.push((n, c == cyc(w), c));
    }
    out
}

fn check_coeffs(o: &mut Outcome, label: &str, s: &QSeries, want: &[&str]) {
    for (n, ok, c) in matches_head(s, want) {
        o.item(ok, format!("{label} q^{n} = {c}"));
    }
}

fn criterion_1() -> Res<Outcome> {
    let mut o = Outcome::new();
    let j = series("E4^3/eta^24 - 744")?;
    o.item(j.coeff_int(-1).is_one(), "J q^-1 = 1");
    o.item(j.coeff_int(0).is_zero(), "J q^0 = 0");
    o.item(
        j.coeff_int(1) == CycNum::from_int(196884),
        format!("J q^1 = {}", j.coeff_int(1)),
    );
    o.item(
        j.coeff_int(2) == CycNum::from_int(21493760),
        format!("J q^2 = {}", j.coeff_int(2)),
    );
    o.summary = "J = q^-1 + 196884 q + 21493760 q^2 + ...".into();
    Ok(o)
}

fn criterion_2() -> Res<Outcome> {
    let mut o = Outcome::new();
    let b = series(irrmoon::moonshine::cases::B25)?;
    check_coeffs(
        &mut o,
        "25b",
        &b,
        &[
            "3/2 - 5/2*sqrt5",
            "-10",
            "5",
            "21 + 5*sqrt5",
            "-25/2 + 25/2*sqrt5",
        ],
    );
    let a = series(irrmoon::moonshine::cases::A25)?;
    o.item(a == b.galois(2)?, "25a = galois(25b, 2)");
    let konst = parse_expr(irrmoon::moonshine::cases::A25)?;
    let bare = parse_expr("eta[0/5]*eta[1/5]*eta[4/5] / (eta[2/5]*eta[3/5]*eta(25))")?
        .series(DEFAULT_TRUNC)?;
    let shift = &konst.series(DEFAULT_TRUNC)?.coeff_int(0) - &bare.coeff_int(0);
    o.item(shift == cyc("1 + sqrt5"), format!("25a constant = {shift}"));
    o.summary = "25b exact in Q(sqrt5) through q^5; 25a is its conjugate".into();
    Ok(o)
}

fn criterion_3() -> Res<Outcome> {
    let mut o = Outcome::new();
    let a = series(irrmoon::moonshine::cases::A49)?;
    check_coeffs(
        &mut o,
        "49a",
        &a,
        &[
            "-3/2 + i*sqrt7/2",
            "-5/2 - 3*i*sqrt7/2",
            "2",
            "3 - i*sqrt7",
            "-3",
        ],
    );
    let b = series(irrmoon::moonshine::cases::B49)?;
    o.item(b == a.galois(-1)?, "49b = galois(49a, -1)");
    o.summary = "49a exact in Q(sqrt-7) through q^5; 49b is its conjugate".into();
    Ok(o)
}

fn criterion_4() -> Res<Outcome> {
    let mut o = Outcome::new();
    let z = series(irrmoon::moonshine::cases::Z77)?;
    check_coeffs(
        &mut o,
        "Z",
        &z,
        &[
            "-3/2 + 3*i*sqrt7/2",
            "1 - i*sqrt7",
            "9",
            "3*(1 - i*sqrt7)",
            "4",
        ],
    );
    let zs = series(irrmoon::moonshine::cases::Z77_STAR)?;
    let conj_ok = (-1..=5).all(|n| zs.coeff_int(n) == z.coeff_int(n).conj());
    o.item(conj_ok, "Z* coefficients are the complex conjugates of Z");
    o.summary = "7||7+ symmetrised series and its conjugate".into();
    Ok(o)
}

fn criterion_5() -> Res<Outcome> {
    let mut o = Outcome::new();
    let tables = load_tables(&default_data_dir().join("tables"));
    let m12 = tables.get("M12").ok_or("M12 table missing or invalid")?;
    // upper sign for 11A, lower for 11B
    let want = |s: &str| {
        let f = |t: &str| {
            t.replace('±', s)
                .replace('∓', if s == "+" { "-" } else { "+" })
        };
        [
            f("1/2 ± i*sqrt11/2"),
            "2".to_string(),
            f("1/2 ± i*sqrt11/2"),
            f("-(1 ± i*sqrt11)"),
            f("-(1/2 ± i*sqrt11/2)"),
        ]
    };
    // the discrepancy recorded for q^5
    let red = |s: &str| {
        cyc(&format!(
            "-1/2 {} i*sqrt11/2",
            if s == "+" { "+" } else { "-" }
        ))
    };
    let mut low_ok = true;
    let mut top_is_recorded = true;
    for (class, sign) in [("11A", "+"), ("11B", "-")] {
        let s = head_char_expansion(m12, class, Scheme::M12)?;
        let w = want(sign);
        let w: Vec<&str> = w.iter().map(String::as_str).collect();
        for (n, ok, c) in matches_head(&s, &w) {
            o.item(ok, format!("{class} q^{n} = {c}"));
            if n < 5 {
                low_ok &= ok;
            } else if !ok {
                top_is_recorded &= c == red(sign);
            }
        }
    }
    o.summary = "11||11+ from the M12 head-character scheme".into();
    if o.status == St::Fail {
        o.known_red = low_ok && top_is_recorded;
        o.summary
            .push_str("; q^5 has the opposite sign of i*sqrt11");
    }
    Ok(o)
}

fn criterion_6() -> Res<Outcome> {
    let mut o = Outcome::new();
    for p in [5u64, 7, 11, 13] {
        let d = builtin(&format!("delta_{p}"), None)?.reduce_mod_p(p)?;
        o.item(
            d.order() == (p - 1) / 2,
            format!("order(delta_{p} mod {p}) = {}", d.order()),
        );
        let img = Psl2pGroup::generate(p, &[d])?;
        let diag = Psl2pGroup::from_filter(p, |x| {
            let [_, b, c, _] = x.entries();
            b == 0 && c == 0
        })?;
        o.item(
            img == diag,
            format!(
                "<Gamma({p}), delta_{p}> image = diagonal image of order {}",
                diag.order()
            ),
        );
    }
    o.summary = "delta_p has order (p-1)/2 and fills the diagonal".into();
    Ok(o)
}

fn criterion_7() -> Res<Outcome> {
    let mut o = Outcome::new();
    let want = |id: &str| match id {
        "5i" | "5ii" => ("D3", 6),
        "7i" | "7ii" => ("A4", 12),
        "7iii" => ("S4", 24),
        "11" => ("A5", 60),
        _ => ("A4", 12),
    };
    for id in CASE_IDS {
        let spec = case_spec(id)?;
        for set in &spec.generator_sets {
            let g = set.group(spec.p)?;
            let (name, n) = want(id);
            let tag = if set.label.is_empty() {
                id.to_string()
            } else {
                format!("{id}{}", set.label)
            };
            o.item(
                g.identify().short() == name && g.order() == n,
                format!(
                    "{tag} quotient {} order {}",
                    g.identify().short(),
                    g.order()
                ),
            );
            for r in set.check_relations(spec.p)? {
                o.item(
                    r.holds,
                    format!("{tag} relation {} (order {})", r.relation, r.order),
                );
            }
        }
    }
    o.summary = "D3, A4, S4, A5 quotients with their presentations".into();
    Ok(o)
}

fn criterion_8() -> Res<Outcome> {
    let mut o = Outcome::new();
    for p in [5u64, 7, 11, 13] {
        let trivial = Psl2pGroup::from_filter(p, |x| x.is_identity())?;
        let g = genus(&trivial)?;
        let oracle = 1 + (p * p - 1) as i64 * (p as i64 - 6) / 24;
        o.item(g.genus == oracle, format!("X({p}) {g} oracle {oracle}"));
    }
    let mut red_ok = true;
    for id in CASE_IDS {
        let spec = case_spec(id)?;
        for set in &spec.generator_sets {
            let g = genus(&set.group(spec.p)?)?;
            let ok = g.genus == 0;
            o.item(ok, format!("{id}{} {g}", set.label));
            if !ok {
                red_ok &= id.starts_with("13r")
                    && (g.index, g.e2, g.e3, g.e_inf, g.genus) == (91, 3, 4, 7, 3);
            }
        }
    }
    o.summary = "X(p) genera 0, 3, 26, 50; fixing groups genus 0".into();
    if o.status == St::Fail {
        o.known_red = red_ok;
        o.summary.push_str("; 13rX fixing groups have genus 3");
    }
    Ok(o)
}

fn criterion_9() -> Res<Outcome> {
    let mut o = Outcome::new();
    let mut census_13 = Vec::new();
    for id in CASE_IDS {
        let spec = case_spec(id)?;
        let cs = build_class_structure(id)?;
        let sing = singular_cusps(&cs);
        for set in &spec.generator_sets {
            let g = set.group(spec.p)?;
            let orbits = orbits_on(&g, &sing);
            let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
            let line = format!(
                "{id}{} {} singular cusps, orbits {sizes:?}",
                set.label,
                sing.len()
            );
            if id.starts_with("13r") {
                o.info(line);
                census_13.push(sizes);
            } else {
                let n = match spec.p {
                    5 => 6,
                    7 if id == "7iii" => 24,
                    7 => 12,
                    _ => 60,
                };
                o.item(sing.len() == n && orbits.len() == 1, line);
            }
        }
    }
    o.summary = "singular cusps form one orbit for p = 5, 7, 11".into();
    if o.status == St::Pass && census_13.iter().any(|s| s.len() != 1) {
        o.status = St::Info;
        o.summary
            .push_str("; 13rX census differs from the single orbit recorded");
    }
    Ok(o)
}

fn criterion_10() -> Res<Outcome> {
    let mut o = Outcome::new();
    let replay = |id: &str| -> Res<_> {
        let cfg = exclusion_config(id)?;
        Ok(run_exclusion(&build_class_structure(id)?, &cfg)?)
    };
    let set = |v: &[(u64, u64)]| v.iter().copied().collect::<BTreeSet<_>>();

    let r = replay("5i")?;
    o.item(
        r.pairs == set(&[(1, 2), (4, 3)]),
        format!("5i {:?}", r.pairs),
    );

    let want7: BTreeSet<_> = (1..7u64)
        .filter(|&n| legendre(n as i64, 7) == 1)
        .map(|n| (5 * n % 7, 4 * n % 7))
        .collect();
    let r = replay("7i")?;
    o.item(r.pairs == want7, format!("7i {:?} want {want7:?}", r.pairs));

    let qr11: Vec<u64> = (1..11u64)
        .filter(|&n| legendre(n as i64, 11) == 1)
        .collect();
    let rem: BTreeSet<_> = qr11.iter().map(|&n| (10 * n % 11, 10 * n % 11)).collect();
    let partners: BTreeSet<_> = qr11.iter().map(|&n| (6 * n % 11, 2 * n % 11)).collect();
    let r = replay("11")?;
    o.item(
        r.pairs == rem.union(&partners).copied().collect(),
        format!("11 {:?}", r.pairs),
    );
    let mapped: BTreeSet<_> = rem.iter().filter_map(|&x| r.partner_of(x)).collect();
    o.item(
        mapped == partners,
        format!("11 partners of (10n,10n) = {mapped:?}"),
    );

    let r = replay("13r1")?;
    o.item(
        r.pairs == set(&[(3, 5), (9, 2), (1, 6)]),
        format!("13r1 {:?}", r.pairs),
    );
    o.summary = "exclusion replay for 5i, 7i, 11, 13r1".into();
    Ok(o)
}

fn criterion_11() -> Res<Outcome> {
    let mut o = Outcome::new();
    for (src, dst, k) in [("5i", "5ii", 2i64), ("7i", "7ii", -1)] {
        let (s, d) = (case_spec(src)?, case_spec(dst)?);
        let p = s.p;
        let target = d.generator_sets[0].group(p)?;
        let image = |g: &[GroupElt]| -> Res<Psl2pGroup> {
            Ok(Psl2pGroup::generate(p, &reduce_generators(g, p)?)?)
        };

        let plain = image(&star_k(&s.generator_sets[0].elements(p)?, k, p)?)?;
        o.item(
            plain == target,
            format!("*{k} {src} = {dst} ({})", target.identify().short()),
        );

        let parse = |names: &[&str]| -> Res<Vec<GroupElt>> {
            Ok(names
                .iter()
                .map(|n| parse_generator(n, Some(p)))
                .collect::<Result<_, _>>()?)
        };
        let st = star_k_conjugated(&parse(s.hauptmoduls[0].invariance)?, k, p)?;
        let dt = parse(d.hauptmoduls[0].invariance)?;
        o.item(
            image(&st)? == image(&dt)?,
            format!("*{k} {src} = {dst} after theta normalisation"),
        );

        let mut rng = rand::rngs::StdRng::seed_from_u64(0xACCE97 + p);
        let mut same = 0;
        for _ in 0..20 {
            let r = star_k_randomized(&s.generator_sets[0].elements(p)?, k, p, &mut rng)?;
            same += usize::from(image(&r)? == plain);
        }
        o.item(
            same == 20,
            format!("*{k} {src}: {same}/20 random representative choices agree"),
        );
    }
    o.summary = "*2 maps 5i to 5ii, *(-1) maps 7i to 7ii, independent of lifts".into();
    Ok(o)
}

fn criterion_12() -> Res<Outcome> {
    let mut o = Outcome::new();
    let i = CycNum::root_of_unity(4, 1);
    let chi = dirichlet_char(13, 4, &i)?;
    let rows: [(&[i64], CycNum); 4] = [
        (&[1, 3, 9], CycNum::one()),
        (&[12, 10, 4], CycNum::from_int(-1)),
        (&[5, 2, 6], i.clone()),
        (&[8, 11, 7], -&i),
    ];
    for (args, v) in rows {
        let ok = args.iter().all(|&a| chi.value(a) == v);
        o.item(ok, format!("chi4({args:?}) = {v}"));
    }
    for (p, sq) in [(5u64, 5i64), (7, -7), (11, -11), (13, 13)] {
        let g = gauss_sum(p)?;
        let g2 = &g * &g;
        o.item(
            g2 == CycNum::from_int(sq),
            format!("gauss_sum({p})^2 = {g2}"),
        );
    }
    let bar = dirichlet_char(13, 4, &-&i)?;
    let q = chi.quotient(&bar)?;
    let ok = (1..13).all(|a| q[a as usize] == CycNum::from_int(legendre(a, 13) as i64));
    o.item(ok, "chi4 / conj(chi4) = (./13)");
    o.summary = "chi4 for p = 13, Gauss sums, Legendre quotient".into();
    Ok(o)
}

fn criterion_13() -> Res<Outcome> {
    let mut o = Outcome::new();
    for id in CASE_IDS {
        let spec = case_spec(id)?;
        for h in &spec.hauptmoduls {
            let Some(dsl) = h.dsl else {
                o.info(format!(
                    "{id} {}: head-character series only, no eta form to evaluate",
                    h.label
                ));
                continue;
            };
            let f = parse_expr(dsl)?;
            let mut worst = 0f64;
            for g in h.invariance {
                let g = parse_generator(g, Some(spec.p))?;
                for (x, y) in SAMPLE_POINTS {
                    let tau = Complex64::new(x, y);
                    worst = worst.max((f.eval(g.act(tau)?)? - f.eval(tau)?).norm());
                }
            }
            o.item(
                worst < NUM_TOL,
                format!("{id} {} max |f(g tau) - f(tau)| = {worst:.1e}", h.label),
            );
        }
    }
    o.summary = format!(
        "hauptmoduls invariant to {NUM_TOL:e} at {} points",
        SAMPLE_POINTS.len()
    );
    Ok(o)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(u32, fn() -> Res<Outcome>); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        let o = f().unwrap_or_else(|e| Outcome {
            status: St::Fail,
            summary: format!("error: {e}"),
            details: Vec::new(),
            known_red: false,
        });
        let tag = match o.status {
            St::Pass => "PASS",
            St::Fail => "FAIL",
            St::Info => "INFO",
        };
        println!("CRITERION {n} {tag} {}", o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        if o.status == St::Fail {
            if o.known_red {
                println!("    (recorded discrepancy reproduced exactly)");
            } else {
                unexpected.push(n);
            }
        }
    }
    println!(
        "acceptance finished in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures in criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
