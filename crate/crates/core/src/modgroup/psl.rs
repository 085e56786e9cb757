//! PSL(2,p) for small primes: elements, closed subgroups, cusps of Γ(p), genus.

use super::GroupError;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) fn is_small_prime(p: u64) -> bool {
    (3..64).contains(&p) && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn inv_mod_u(a: u64, p: u64) -> u64 {
    // p prime: Fermat
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn l2p_order(p: u64) -> usize {
    (p * (p * p - 1) / 2) as usize
}

/// An element of PSL(2,p), stored as the lexicographically smaller of ±M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Psl2pElt {
    p: u64,
    m: [u64; 4],
}

impl Psl2pElt {
    /// Entries are reduced mod p; the determinant must be 1 mod p.
    pub fn new(p: u64, m: [u64; 4]) -> Self {
        let m = m.map(|x| x % p);
        debug_assert_eq!(
            (m[0] * m[3] + p * p - m[1] * m[2] % p) % p,
            1 % p,
            "det must be 1"
        );
        let neg = m.map(|x| (p - x) % p);
        Psl2pElt {
            p,
            m: if neg < m { neg } else { m },
        }
    }

    pub fn from_signed(p: u64, m: [i64; 4]) -> Self {
        Self::new(p, m.map(|x| x.rem_euclid(p as i64) as u64))
    }

    pub fn identity(p: u64) -> Self {
        Self::new(p, [1, 0, 0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p;
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Self::new(
            p,
            [
                (a * e + b * g) % p,
                (a * f + b * h) % p,
                (c * e + d * g) % p,
                (c * f + d * h) % p,
            ],
        )
    }

    pub fn inv(&self) -> Self {
        let p = self.p;
        let [a, b, c, d] = self.m;
        Self::new(p, [d, (p - b) % p, (p - c) % p, a])
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { *self };
        let mut acc = Self::identity(self.p);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    pub fn act_cusp(&self, c: &Cusp) -> Cusp {
        let p = self.p;
        let [a, b, cc, d] = self.m;
        Cusp::new(p, (a * c.a + b * c.c) % p, (cc * c.a + d * c.c) % p)
    }
}

impl fmt::Display for Psl2pElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "±[[{a},{b}],[{c},{d}]] mod {}", self.p)
    }
}

/// A cusp of Γ(p): a nonzero vector (a,c) over F_p up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    pub p: u64,
    pub a: u64,
    pub c: u64,
}

impl Cusp {
    pub fn new(p: u64, a: u64, c: u64) -> Self {
        let (a, c) = (a % p, c % p);
        assert!((a, c) != (0, 0), "cusp vector must be nonzero");
        let n = ((p - a) % p, (p - c) % p);
        let (a, c) = if n < (a, c) { n } else { (a, c) };
        Cusp { p, a, c }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.c)
    }
}

pub fn cusps(p: u64) -> Vec<Cusp> {
    let mut out: Vec<Cusp> = Vec::new();
    for a in 0..p {
        for c in 0..p {
            if (a, c) != (0, 0) {
                let x = Cusp::new(p, a, c);
                if x.a == a && x.c == c {
                    out.push(x);
                }
            }
        }
    }
    out
}

pub type Census = BTreeMap<u64, usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupName {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    A4,
    S4,
    A5,
    L2p(u64),
    Other(Census),
}

impl GroupName {
    /// Compact label: C3, D3, A4, S4, A5, L2(7), trivial, other.
    pub fn short(&self) -> String {
        match self {
            GroupName::Trivial => "trivial".into(),
            GroupName::Cyclic(n) => format!("C{n}"),
            GroupName::Dihedral(n) => format!("D{n}"),
            GroupName::A4 => "A4".into(),
            GroupName::S4 => "S4".into(),
            GroupName::A5 => "A5".into(),
            GroupName::L2p(p) => format!("L2({p})"),
            GroupName::Other(_) => "other".into(),
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Trivial => write!(f, "trivial"),
            GroupName::Cyclic(n) => write!(f, "cyclic_{n}"),
            GroupName::Dihedral(n) => write!(f, "dihedral_{n}"),
            GroupName::A4 => write!(f, "A4"),
            GroupName::S4 => write!(f, "S4"),
            GroupName::A5 => write!(f, "A5"),
            GroupName::L2p(_) => write!(f, "L2p"),
            GroupName::Other(c) => {
                let parts: Vec<String> = c.iter().map(|(o, n)| format!("{o}:{n}")).collect();
                write!(f, "other[{}]", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Psl2pGroup {
    p: u64,
    generators: Vec<Psl2pElt>,
    elements: Vec<Psl2pElt>,
    set: HashSet<Psl2pElt>,
}

impl PartialEq for Psl2pGroup {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.elements == o.elements
    }
}

impl Psl2pGroup {
    /// Closure of the generators under multiplication (breadth first).
    pub fn generate(p: u64, gens: &[Psl2pElt]) -> Result<Self, GroupError> {
        if !is_small_prime(p) {
            return Err(GroupError::BadPrime(p));
        }
        if gens.iter().any(|g| g.p != p) {
            return Err(GroupError::MixedPrimes);
        }
        let id = Psl2pElt::identity(p);
        let mut set = HashSet::from([id]);
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for g in gens {
                    let y = x.mul(g);
                    if set.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut elements: Vec<Psl2pElt> = set.iter().copied().collect();
        elements.sort();
        Ok(Psl2pGroup {
            p,
            generators: gens.to_vec(),
            elements,
            set,
        })
    }

    /// The subgroup of all elements satisfying `keep`, assumed closed.
    pub fn from_filter(p: u64, keep: impl Fn(&Psl2pElt) -> bool) -> Result<Self, GroupError> {
        let all = l2p(p)?;
        let elements: Vec<Psl2pElt> = all.elements.iter().copied().filter(|x| keep(x)).collect();
        let set = elements.iter().copied().collect();
        Ok(Psl2pGroup {
            p,
            generators: elements.clone(),
            elements,
            set,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generators(&self) -> &[Psl2pElt] {
        &self.generators
    }

    pub fn elements(&self) -> &[Psl2pElt] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &Psl2pElt) -> bool {
        self.set.contains(x)
    }

    pub fn is_subgroup_of(&self, o: &Psl2pGroup) -> bool {
        self.elements.iter().all(|x| o.contains(x))
    }

    pub fn census(&self) -> Census {
        let mut c = Census::new();
        for x in &self.elements {
            *c.entry(x.order()).or_insert(0) += 1;
        }
        c
    }

    /// Identification by order and element-order census.
    pub fn identify(&self) -> GroupName {
        let n = self.order();
        let c = self.census();
        let count = |o: u64| c.get(&o).copied().unwrap_or(0);
        if n == 1 {
            return GroupName::Trivial;
        }
        if n == l2p_order(self.p) {
            return GroupName::L2p(self.p);
        }
        if count(n as u64) > 0 {
            return GroupName::Cyclic(n);
        }
        if n % 2 == 0 {
            let h = n / 2;
            let inv = if h % 2 == 0 { h + 1 } else { h };
            if count(h as u64) > 0 && count(2) == inv {
                return GroupName::Dihedral(h);
            }
            if h == 2 && count(2) == 3 {
                return GroupName::Dihedral(2);
            }
        }
        let profile: Vec<(u64, usize)> = c.iter().map(|(a, b)| (*a, *b)).collect();
        match (n, profile.as_slice()) {
            (12, [(1, 1), (2, 3), (3, 8)]) => GroupName::A4,
            (24, [(1, 1), (2, 9), (3, 8), (4, 6)]) => GroupName::S4,
            (60, [(1, 1), (2, 15), (3, 20), (5, 24)]) => GroupName::A5,
            _ => GroupName::Other(c),
        }
    }
}

fn l2p_cache() -> &'static Mutex<HashMap<u64, Arc<Psl2pGroup>>> {
    static C: OnceLock<Mutex<HashMap<u64, Arc<Psl2pGroup>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All of PSL(2,p).
pub fn l2p(p: u64) -> Result<Arc<Psl2pGroup>, GroupError> {
    if !is_small_prime(p) {
        return Err(GroupError::BadPrime(p));
    }
    if let Some(g) = l2p_cache().lock().unwrap().get(&p) {
        return Ok(g.clone());
    }
    let mut set = HashSet::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 {
                        set.insert(Psl2pElt::new(p, [a, b, c, d]));
                    }
                }
            }
        }
    }
    let mut elements: Vec<Psl2pElt> = set.iter().copied().collect();
    elements.sort();
    let gens = vec![
        Psl2pElt::from_signed(p, [0, -1, 1, 0]),
        Psl2pElt::new(p, [1, 1, 0, 1]),
    ];
    let g = Arc::new(Psl2pGroup {
        p,
        generators: gens,
        elements,
        set,
    });
    l2p_cache().lock().unwrap().insert(p, g.clone());
    Ok(g)
}

/// Orbits of G on `points` (which should be G-stable), in order of first appearance.
pub fn orbits_on(g: &Psl2pGroup, points: &[Cusp]) -> Vec<Vec<Cusp>> {
    let mut seen: HashSet<Cusp> = HashSet::new();
    let mut out = Vec::new();
    for &x in points {
        if seen.contains(&x) {
            continue;
        }
        let mut orb = vec![x];
        seen.insert(x);
        let mut i = 0;
        while i < orb.len() {
            let y = orb[i];
            for h in g
                .generators
                .iter()
                .chain(std::iter::once(&Psl2pElt::identity(g.p)))
            {
                let z = h.act_cusp(&y);
                if seen.insert(z) {
                    orb.push(z);
                }
            }
            i += 1;
        }
        orb.sort();
        out.push(orb);
    }
    out
}

pub fn cusp_orbits(g: &Psl2pGroup) -> Vec<Vec<Cusp>> {
    orbits_on(g, &cusps(g.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusData {
    pub index: usize,
    pub e2: usize,
    pub e3: usize,
    pub e_inf: usize,
    pub genus: i64,
}

impl fmt::Display for GenusData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mu={} e2={} e3={} einf={} g={}",
            self.index, self.e2, self.e3, self.e_inf, self.genus
        )
    }
}

/// Genus from the action of S, ST and T on the cosets xG of G in PSL(2,p).
pub fn genus(g: &Psl2pGroup) -> Result<GenusData, GroupError> {
    let p = g.p;
    let all = l2p(p)?;
    let mut coset: HashMap<Psl2pElt, usize> = HashMap::new();
    let mut reps = Vec::new();
    for x in all.elements() {
        if coset.contains_key(x) {
            continue;
        }
        let k = reps.len();
        reps.push(*x);
        for h in g.elements() {
            coset.insert(x.mul(h), k);
        }
    }
    let mu = reps.len();
    let perm = |m: &Psl2pElt| -> Vec<usize> { reps.iter().map(|r| coset[&m.mul(r)]).collect() };
    let s = Psl2pElt::from_signed(p, [0, -1, 1, 0]);
    let t = Psl2pElt::new(p, [1, 1, 0, 1]);
    let fixed = |v: Vec<usize>| v.iter().enumerate().filter(|(i, j)| i == *j).count();
    let e2 = fixed(perm(&s));
    let e3 = fixed(perm(&s.mul(&t)));
    let pt = perm(&t);
    let mut seen = vec![false; mu];
    let mut e_inf = 0;
    for i in 0..mu {
        if seen[i] {
            continue;
        }
        e_inf += 1;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = pt[j];
        }
    }
    let twelve_g = 12 + mu as i64 - 3 * e2 as i64 - 4 * e3 as i64 - 6 * e_inf as i64;
    if twelve_g % 12 != 0 || twelve_g < 0 {
        return Err(GroupError::Genus(format!("{twelve_g}/12")));
    }
    Ok(GenusData {
        index: mu,
        e2,
        e3,
        e_inf,
        genus: twelve_g / 12,
    })
}

/// A word over named generators: products with `*`, powers with `^n`, parentheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Gen(String),
    Prod(Vec<Word>),
    Pow(Box<Word>, i64),
}

pub fn parse_word(text: &str) -> Result<Word, GroupError> {
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let w = word_prod(&s, &mut i)?;
    if i != s.len() {
        return Err(GroupError::Parse {
            pos: i,
            msg: format!("unexpected '{}'", s[i]),
        });
    }
    Ok(w)
}

fn word_prod(s: &[char], i: &mut usize) -> Result<Word, GroupError> {
    let mut parts = vec![word_pow(s, i)?];
    while s.get(*i) == Some(&'*') {
        *i += 1;
        parts.push(word_pow(s, i)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Word::Prod(parts)
    })
}

fn word_pow(s: &[char], i: &mut usize) -> Result<Word, GroupError> {
    let base = if s.get(*i) == Some(&'(') {
        *i += 1;
        let w = word_prod(s, i)?;
        if s.get(*i) != Some(&')') {
            return Err(GroupError::Parse {
                pos: *i,
                msg: "expected ')'".into(),
            });
        }
        *i += 1;
        w
    } else {
        let start = *i;
        while s
            .get(*i)
            .map_or(false, |c| c.is_alphanumeric() || *c == '_' || *c == '\'')
        {
            *i += 1;
        }
        if start == *i {
            return Err(GroupError::Parse {
                pos: start,
                msg: "expected a generator".into(),
            });
        }
        Word::Gen(s[start..*i].iter().collect())
    };
    if s.get(*i) == Some(&'^') {
        *i += 1;
        let braced = s.get(*i) == Some(&'{');
        if braced {
            *i += 1;
        }
        let start = *i;
        if s.get(*i) == Some(&'-') {
            *i += 1;
        }
        while s.get(*i).map_or(false, |c| c.is_ascii_digit()) {
            *i += 1;
        }
        let n: i64 = s[start..*i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| GroupError::Parse {
                pos: start,
                msg: "expected an integer exponent".into(),
            })?;
        if braced {
            if s.get(*i) != Some(&'}') {
                return Err(GroupError::Parse {
                    pos: *i,
                    msg: "expected '}'".into(),
                });
            }
            *i += 1;
        }
        return Ok(Word::Pow(Box::new(base), n));
    }
    Ok(base)
}

impl Word {
    pub fn eval(&self, p: u64, gens: &BTreeMap<String, Psl2pElt>) -> Result<Psl2pElt, GroupError> {
        Ok(match self {
            Word::Gen(n) => *gens
                .get(n)
                .ok_or_else(|| GroupError::UndeclaredGenerator(n.clone()))?,
            Word::Prod(v) => {
                let mut acc = Psl2pElt::identity(p);
                for w in v {
                    acc = acc.mul(&w.eval(p, gens)?);
                }
                acc
            }
            Word::Pow(w, e) => w.eval(p, gens)?.pow(*e),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationResult {
    pub relation: String,
    /// Order of the element the word evaluates to; the relation holds iff this is 1.
    pub order: u64,
    pub holds: bool,
}

/// Evaluate each relation word (target: identity) in PSL(2,p).
pub fn check_relations(
    p: u64,
    gens: &BTreeMap<String, Psl2pElt>,
    relations: &[&str],
) -> Result<Vec<RelationResult>, GroupError> {
    relations
        .iter()
        .map(|r| {
            let x = parse_word(r)?.eval(p, gens)?;
            let order = x.order();
            Ok(RelationResult {
                relation: r.to_string(),
                order,
                holds: order == 1,
            })
        })
        .collect()
}

impl Psl2pGroup {
    pub fn check_relations(
        p: u64,
        gens: &BTreeMap<String, Psl2pElt>,
        relations: &[&str],
    ) -> Result<Vec<RelationResult>, GroupError> {
        check_relations(p, gens, relations)
    }
}
