//! Character tables: parsing, validation and power-map bookkeeping.

use super::MoonshineError;
use crate::exact::{cyclo, parse_cyc, CycNum};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub name: String,
    pub order: u64,
    pub centralizer: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharTable {
    pub group: String,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
    /// prime → image class index for each class (None where the file is silent)
    pub power_maps: BTreeMap<u64, Vec<Option<usize>>>,
    pub irreducibles: Vec<Vec<CycNum>>,
}

fn terr(line: usize, msg: impl Into<String>) -> MoonshineError {
    MoonshineError::Table {
        line,
        msg: msg.into(),
    }
}

pub fn load_char_table(path: &Path) -> Result<CharTable, MoonshineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MoonshineError::Io(format!("{}: {e}", path.display())))?;
    parse_char_table(&text)
}

/// Parse and validate.
pub fn parse_char_table(text: &str) -> Result<CharTable, MoonshineError> {
    let t = parse_unchecked(text)?;
    t.validate()?;
    Ok(t)
}

fn parse_unchecked(text: &str) -> Result<CharTable, MoonshineError> {
    let mut group = None;
    let mut classes: Vec<ClassInfo> = Vec::new();
    let mut raw_maps: Vec<(usize, u64, String, String)> = Vec::new();
    let mut rows: Vec<(usize, usize, Vec<CycNum>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| terr(ln, format!("expected an integer, got '{s}'")))
        };
        match f[0] {
            "GROUP" => {
                if f.len() != 4 || f[2] != "ORDER" {
                    return Err(terr(ln, "expected GROUP <name> ORDER <n>"));
                }
                group = Some((f[1].to_string(), num(f[3])?));
            }
            "CLASS" => {
                if f.len() != 4 {
                    return Err(terr(ln, "expected CLASS <name> <order> <centralizer>"));
                }
                if classes.iter().any(|c| c.name == f[1]) {
                    return Err(terr(ln, format!("duplicate class {}", f[1])));
                }
                classes.push(ClassInfo {
                    name: f[1].to_string(),
                    order: num(f[2])?,
                    centralizer: num(f[3])?,
                });
            }
            "POWERMAP" => {
                if f.len() != 4 {
                    return Err(terr(ln, "expected POWERMAP <k> <from> <to>"));
                }
                raw_maps.push((ln, num(f[1])?, f[2].to_string(), f[3].to_string()));
            }
            "CHAR" => {
                if f.len() < 2 {
                    return Err(terr(ln, "expected CHAR <index> <values>"));
                }
                let idx = num(f[1])? as usize;
                let vals = f[2..]
                    .iter()
                    .map(|v| parse_cyc(v).map_err(|e| terr(ln, format!("bad value '{v}': {e}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push((ln, idx, vals));
            }
            other => return Err(terr(ln, format!("unknown record '{other}'"))),
        }
    }
    let (group, order) = group.ok_or_else(|| terr(0, "missing GROUP line"))?;
    if classes.is_empty() {
        return Err(terr(0, "no classes"));
    }
    let index: BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect();
    let mut power_maps: BTreeMap<u64, Vec<Option<usize>>> = BTreeMap::new();
    for (ln, k, from, to) in raw_maps {
        let (&a, &b) = (
            index
                .get(from.as_str())
                .ok_or_else(|| terr(ln, format!("unknown class {from}")))?,
            index
                .get(to.as_str())
                .ok_or_else(|| terr(ln, format!("unknown class {to}")))?,
        );
        if !cyclo::is_prime(k) {
            return Err(terr(ln, format!("power map for non-prime {k}")));
        }
        power_maps
            .entry(k)
            .or_insert_with(|| vec![None; classes.len()])[a] = Some(b);
    }
    let mut irreducibles = Vec::new();
    for (n, (ln, idx, vals)) in rows.into_iter().enumerate() {
        if idx != n + 1 {
            return Err(terr(ln, format!("expected CHAR {}, found {idx}", n + 1)));
        }
        if vals.len() != classes.len() {
            return Err(terr(
                ln,
                format!("{} values for {} classes", vals.len(), classes.len()),
            ));
        }
        irreducibles.push(vals);
    }
    Ok(CharTable {
        group,
        order,
        classes,
        power_maps,
        irreducibles,
    })
}

impl CharTable {
    pub fn class_index(&self, name: &str) -> Result<usize, MoonshineError> {
        self.classes
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| MoonshineError::UnknownClass(format!("{name} in {}", self.group)))
    }

    pub fn class_size(&self, i: usize) -> u64 {
        self.order / self.classes[i].centralizer
    }

    /// χ_j (1-based, ATLAS numbering) at a class.
    pub fn value(&self, j: usize, class: usize) -> Result<&CycNum, MoonshineError> {
        self.irreducibles
            .get(j.wrapping_sub(1))
            .map(|row| &row[class])
            .ok_or_else(|| MoonshineError::BadCharacter(format!("{} has no chi_{j}", self.group)))
    }

    pub fn column(&self, class: usize) -> Vec<CycNum> {
        self.irreducibles.iter().map(|r| r[class].clone()).collect()
    }

    pub fn validate(&self) -> Result<(), MoonshineError> {
        let n = self.classes.len();
        let bad = |msg: String| MoonshineError::Table { line: 0, msg };
        if self.classes[0].order != 1 || self.classes[0].centralizer != self.order {
            return Err(bad("first class must be the identity".into()));
        }
        let mut total = 0u64;
        for c in &self.classes {
            if c.centralizer == 0 || self.order % c.centralizer != 0 {
                return Err(bad(format!(
                    "centralizer of {} does not divide the group order",
                    c.name
                )));
            }
            total += self.order / c.centralizer;
        }
        if total != self.order {
            return Err(bad(format!(
                "class sizes sum to {total}, not {}",
                self.order
            )));
        }
        if self.irreducibles.len() != n {
            return Err(bad(format!(
                "{} irreducibles for {n} classes",
                self.irreducibles.len()
            )));
        }
        if !self.irreducibles[0].iter().all(|v| v.is_one()) {
            return Err(bad("first irreducible is not trivial".into()));
        }
        for (k, map) in &self.power_maps {
            for (i, img) in map.iter().enumerate() {
                if let Some(j) = img {
                    let (src, dst) = (self.classes[i].order, self.classes[*j].order);
                    let want = src / num_integer::gcd(src, *k);
                    if src % dst != 0 || dst != want {
                        return Err(MoonshineError::PowerMap(format!(
                            "{}^{k} -> {} has order {dst}, expected {want}",
                            self.classes[i].name, self.classes[*j].name
                        )));
                    }
                }
            }
        }
        self.check_orthogonality()
    }

    /// Σ_c |c| χ_i(c) conj(χ_j(c)) = |G| δ_ij, exactly.
    fn check_orthogonality(&self) -> Result<(), MoonshineError> {
        let sizes: Vec<CycNum> = (0..self.classes.len())
            .map(|c| CycNum::from_int(self.class_size(c) as i64))
            .collect();
        let weighted: Vec<Vec<CycNum>> = self
            .irreducibles
            .iter()
            .map(|r| r.iter().zip(&sizes).map(|(v, s)| v * s).collect())
            .collect();
        let conj: Vec<Vec<CycNum>> = self
            .irreducibles
            .iter()
            .map(|r| r.iter().map(|v| v.conj()).collect())
            .collect();
        let g = CycNum::from_int(self.order as i64);
        for i in 0..weighted.len() {
            for j in i..conj.len() {
                let prods: Vec<CycNum> = weighted[i]
                    .iter()
                    .zip(&conj[j])
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .collect();
                let s = CycNum::sum(prods.iter());
                let ok = if i == j { s == g } else { s.is_zero() };
                if !ok {
                    return Err(MoonshineError::Orthogonality {
                        group: self.group.clone(),
                        i: i + 1,
                        j: j + 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// The class of h^k for h in class `class` (k coprime to the element order
    /// or covered by the prime power maps).
    pub fn power_class(&self, class: usize, k: i64) -> Result<usize, MoonshineError> {
        let ord = self.classes[class].order as i64;
        let k = k.rem_euclid(ord.max(1)) as u64;
        if k == 0 {
            return Ok(0);
        }
        let mut cur = class;
        for (q, e) in cyclo::factorize(k) {
            for _ in 0..e {
                cur = match self.power_maps.get(&q).and_then(|m| m[cur]) {
                    Some(j) => j,
                    None => self.galois_image(cur, q)?,
                };
            }
        }
        Ok(cur)
    }

    /// Class whose column is the q-th Galois image of the given column.
    fn galois_image(&self, class: usize, q: u64) -> Result<usize, MoonshineError> {
        let ord = self.classes[class].order;
        if num_integer::gcd(ord, q) != 1 {
            return Err(MoonshineError::PowerMap(format!(
                "no {q}-power map for {}",
                self.classes[class].name
            )));
        }
        let want: Vec<CycNum> = self
            .column(class)
            .iter()
            .map(|v| v.galois(q as i64))
            .collect::<Result<_, _>>()?;
        (0..self.classes.len())
            .find(|&c| self.classes[c].order == ord && self.column(c) == want)
            .ok_or_else(|| {
                MoonshineError::PowerMap(format!(
                    "no Galois image of {} under *{q}",
                    self.classes[class].name
                ))
            })
    }
}

/// How the powers h^a (a = 1..p−1) of an order-p class fall into classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerClasses {
    pub p: u64,
    /// number of blocks, i.e. the order of the Dirichlet character
    pub n: usize,
    /// exponents grouped by the class of h^a, each sorted; the block of 1 comes first
    pub blocks: Vec<Vec<u64>>,
    pub class_names: Vec<String>,
}

impl PowerClasses {
    pub fn identity_block(&self) -> &[u64] {
        &self.blocks[0]
    }
}

pub fn classify_powers(
    table: &CharTable,
    class_name: &str,
) -> Result<PowerClasses, MoonshineError> {
    let c = table.class_index(class_name)?;
    let p = table.classes[c].order;
    if p < 3 || !cyclo::is_prime(p) {
        return Err(MoonshineError::NotOrderP {
            class: class_name.to_string(),
            order: p,
        });
    }
    let mut by_class: Vec<(usize, Vec<u64>)> = Vec::new();
    for a in 1..p {
        let img = table.power_class(c, a as i64)?;
        match by_class.iter_mut().find(|(k, _)| *k == img) {
            Some((_, v)) => v.push(a),
            None => by_class.push((img, vec![a])),
        }
    }
    Ok(PowerClasses {
        p,
        n: by_class.len(),
        class_names: by_class
            .iter()
            .map(|(k, _)| table.classes[*k].name.clone())
            .collect(),
        blocks: by_class.into_iter().map(|(_, v)| v).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
# S3
GROUP S3 ORDER 6
CLASS 1A 1 6
CLASS 2A 2 2
CLASS 3A 3 3
POWERMAP 2 1A 1A
POWERMAP 2 2A 1A
POWERMAP 2 3A 3A
POWERMAP 3 3A 1A
CHAR 1 1 1 1
CHAR 2 1 -1 1
CHAR 3 2 0 -1
";

    #[test]
    fn toy_table() {
        let t = parse_char_table(TOY).unwrap();
        assert_eq!(t.classes.len(), 3);
        assert_eq!(t.class_size(1), 3);
        assert_eq!(t.power_class(2, 2).unwrap(), 2);
        let pc = classify_powers(&t, "3A").unwrap();
        assert_eq!(pc.n, 1);
        assert_eq!(pc.blocks, vec![vec![1, 2]]);
        assert!(classify_powers(&t, "2A").is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        let broken = TOY.replace("CHAR 3 2 0 -1", "CHAR 3 2 1 -1");
        match parse_char_table(&broken) {
            Err(MoonshineError::Orthogonality { i, j, .. }) => assert_eq!((i, j), (1, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_char_table(&TOY.replace("CHAR 1 1 1 1", "CHAR 1 1 1")).is_err());
        assert!(parse_char_table(&TOY.replace("POWERMAP 3 3A 1A", "POWERMAP 3 3A 2A")).is_err());
        assert!(parse_char_table(&TOY.replace("GROUP S3 ORDER 6\n", "")).is_err());
        assert!(parse_char_table(&TOY.replace("CHAR 2", "CHAR 5")).is_err());
    }
}
