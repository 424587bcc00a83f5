//! The presentation zoo and the retraction maps between its members.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{signed_rotations, reduce_letters, Alphabet, Image, Letter, LetterMap, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Ok { k: usize },
    HatOk { k: usize },
    J,
    Pk { k: usize },
    HatPk { k: usize },
    Bm { m: usize },
    Qm { m: usize },
    Um { m: usize },
    Skm { k: usize, m: usize },
    Custom(String),
}

impl Family {
    pub fn k(&self) -> Option<usize> {
        match *self {
            Family::Ok { k } | Family::HatOk { k } | Family::Pk { k } | Family::HatPk { k } => Some(k),
            Family::Skm { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn m(&self) -> Option<usize> {
        match *self {
            Family::Bm { m } | Family::Qm { m } | Family::Um { m } | Family::Skm { m, .. } => Some(m),
            _ => None,
        }
    }

    pub fn tag(&self) -> &str {
        match self {
            Family::Ok { .. } => "Ok",
            Family::HatOk { .. } => "HatOk",
            Family::J => "J",
            Family::Pk { .. } => "Pk",
            Family::HatPk { .. } => "HatPk",
            Family::Bm { .. } => "Bm",
            Family::Qm { .. } => "Qm",
            Family::Um { .. } => "Um",
            Family::Skm { .. } => "Skm",
            Family::Custom(_) => "Custom",
        }
    }

    /// Parses `Ok`, `Pk` etc. together with optional `k` and `m`.
    pub fn from_parts(tag: &str, k: Option<usize>, m: Option<usize>) -> Result<Family> {
        let need_k = || k.ok_or_else(|| Error::Param(format!("family {tag} needs k")));
        let need_m = || m.ok_or_else(|| Error::Param(format!("family {tag} needs m")));
        let fam = match tag.to_ascii_lowercase().as_str() {
            "ok" => Family::Ok { k: need_k()? },
            "hatok" => Family::HatOk { k: need_k()? },
            "j" => Family::J,
            "pk" => Family::Pk { k: need_k()? },
            "hatpk" => Family::HatPk { k: need_k()? },
            "bm" => Family::Bm { m: need_m()? },
            "qm" => Family::Qm { m: need_m()? },
            "um" => Family::Um { m: need_m()? },
            "skm" => Family::Skm { k: need_k()?, m: need_m()? },
            _ => return Err(Error::Param(format!("unknown family {tag}"))),
        };
        Ok(fam)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Custom(name) => write!(f, "Custom {name}"),
            Family::J => write!(f, "J"),
            Family::Skm { k, m } => write!(f, "Skm k={k} m={m}"),
            other => {
                if let Some(k) = other.k() {
                    write!(f, "{} k={k}", other.tag())
                } else {
                    write!(f, "{} m={}", other.tag(), other.m().unwrap_or(0))
                }
            }
        }
    }
}

#[derive(Debug)]
pub struct Presentation {
    alphabet: Arc<Alphabet>,
    relators: Vec<Word>,
    family: Family,
    conjugates: HashSet<Vec<Letter>>,
}

impl Presentation {
    pub fn new(alphabet: Arc<Alphabet>, relators: Vec<Word>, family: Family) -> Result<Self> {
        let mut conjugates = HashSet::new();
        for r in &relators {
            if r.is_empty() {
                return Err(Error::Param("empty relator".into()));
            }
            if !crate::word::same_alphabet(r.alphabet(), &alphabet) {
                return Err(Error::AlphabetMismatch("relator over a foreign alphabet".into()));
            }
            conjugates.extend(signed_rotations(r.letters()));
        }
        Ok(Presentation { alphabet, relators, family, conjugates })
    }

    pub fn custom(name: &str, gens: &[&str], relators: &[&str]) -> Result<Self> {
        let alphabet = Arc::new(Alphabet::new(gens.iter().copied())?);
        let rels = relators
            .iter()
            .map(|r| Word::parse(&alphabet, r))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(alphabet, rels, Family::Custom(name.to_string()))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        Word::parse(&self.alphabet, text)
    }

    pub fn sym(&self, name: &str) -> Result<u32> {
        self.alphabet.require(name)
    }

    /// True when `w` is a cyclic conjugate of some relator or its inverse.
    pub fn is_relator_conjugate(&self, w: &[Letter]) -> bool {
        self.conjugates.contains(w)
    }

    pub fn relator_index(&self, w: &[Letter]) -> Option<usize> {
        if !self.is_relator_conjugate(w) {
            return None;
        }
        self.relators
            .iter()
            .position(|r| signed_rotations(r.letters()).contains(w))
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    /// `gens:` line followed by one `rel:` line per relator.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("gens:");
        for g in self.alphabet.symbols() {
            s.push(' ');
            s.push_str(g);
        }
        s.push('\n');
        for r in &self.relators {
            s.push_str("rel: ");
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_text(name: &str, text: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                gens = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                rels.push(rest.trim().to_string());
            } else {
                return Err(Error::Parse(format!("unexpected presentation line {line:?}")));
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse("missing gens: line".into()))?;
        let alphabet = Arc::new(Alphabet::new(gens)?);
        let relators = rels
            .iter()
            .map(|r| Word::parse(&alphabet, r))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(alphabet, relators, Family::Custom(name.to_string()))
    }
}

fn s(i: usize) -> String {
    format!("s{i}")
}

fn hs(i: usize) -> String {
    format!("hs{i}")
}

fn a(i: usize) -> String {
    format!("a{i}")
}

fn comm(x: &str, y: &str) -> String {
    format!("{x}^-1 {y}^-1 {x} {y}")
}

/// Relators of the Theta-type presentation on generators `ss`, `f`, `g`.
fn theta_relators(ss: &[String], f: &str, g: &str) -> Vec<String> {
    let k = ss.len();
    let mut out = Vec::new();
    out.push(format!("{f}^-1 {0} {f} {0}^-1", ss[k - 1]));
    for i in 0..k - 1 {
        out.push(format!("{f}^-1 {0} {f} {1}^-1 {0}^-1", ss[i], ss[i + 1]));
    }
    out.push(format!("{g}^-1 {0} {g} {0}^-1", ss[k - 1]));
    out.push(format!("{g}^-1 {0} {g} {0}^-1", ss[k - 2]));
    for i in 0..k.saturating_sub(2) {
        out.push(format!("{g}^-1 {0} {g} {1}^-1 {0}^-1", ss[i], ss[i + 1]));
    }
    for i in 0..k {
        for j in i + 1..k {
            out.push(comm(&ss[i], &ss[j]));
        }
    }
    out
}

fn sigma_relators(m: usize) -> Vec<String> {
    let mut out = vec![format!("sigma^-1 {0} sigma {0}^-1", a(m))];
    for i in 1..m {
        out.push(format!("sigma^-1 {0} sigma {1}^-1 {0}^-1", a(i), a(i + 1)));
    }
    out
}

fn b_relators(sk: &str, hsk: &str) -> Vec<String> {
    vec![
        format!("t^-1 b {sk} b^-3"),
        format!("{sk}^-1 b t b^-3"),
        format!("{hsk}^-1 b {hsk} b^-3"),
    ]
}

struct Shape {
    gens: Vec<String>,
    rels: Vec<String>,
}

fn shape_for(family: &Family) -> Result<Shape> {
    let need_k = |k: usize| {
        if k < 2 {
            Err(Error::Param(format!("k must be at least 2, got {k}")))
        } else {
            Ok(())
        }
    };
    let need_m = |m: usize| {
        if m < 1 {
            Err(Error::Param("m must be at least 1".into()))
        } else {
            Ok(())
        }
    };
    let shape = match *family {
        Family::Ok { k } => {
            need_k(k)?;
            let ss: Vec<String> = (1..=k).map(s).collect();
            let mut gens = ss.clone();
            gens.extend(["f".to_string(), "g".to_string()]);
            Shape { rels: theta_relators(&ss, "f", "g"), gens }
        }
        Family::HatOk { k } => {
            need_k(k)?;
            let ss: Vec<String> = (1..=k).map(hs).collect();
            let mut gens = ss.clone();
            gens.extend(["hf".to_string(), "hg".to_string()]);
            Shape { rels: theta_relators(&ss, "hf", "hg"), gens }
        }
        Family::J => Shape {
            gens: ["b", "t", "s", "hs"].map(String::from).to_vec(),
            rels: b_relators("s", "hs"),
        },
        Family::Pk { k } => {
            need_k(k)?;
            let ss: Vec<String> = (1..=k).map(s).collect();
            let hh: Vec<String> = (1..=k).map(hs).collect();
            let mut gens = vec!["b".to_string(), "t".to_string()];
            gens.extend(ss.iter().cloned());
            gens.extend(["f".to_string(), "g".to_string()]);
            gens.extend(hh.iter().cloned());
            gens.extend(["hf".to_string(), "hg".to_string()]);
            let mut rels = theta_relators(&ss, "f", "g");
            rels.extend(theta_relators(&hh, "hf", "hg"));
            rels.extend(b_relators(&s(k), &hs(k)));
            Shape { gens, rels }
        }
        Family::HatPk { k } => {
            need_k(k)?;
            let ss: Vec<String> = (1..=k).map(s).collect();
            let hh: Vec<String> = (1..=k).map(hs).collect();
            let mut gens = vec!["b".to_string(), "t".to_string()];
            gens.extend(ss.iter().cloned());
            gens.extend(hh.iter().cloned());
            let mut rels = b_relators(&s(k), &hs(k));
            for set in [&ss, &hh] {
                for i in 0..k {
                    for j in i + 1..k {
                        rels.push(comm(&set[i], &set[j]));
                    }
                }
            }
            Shape { gens, rels }
        }
        Family::Bm { m } => {
            need_m(m)?;
            let mut gens: Vec<String> = (1..=m).map(a).collect();
            gens.extend(["sigma".to_string(), "t".to_string()]);
            let mut rels = sigma_relators(m);
            rels.extend((1..=m).map(|j| comm("t", &a(j))));
            Shape { gens, rels }
        }
        Family::Qm { m } => {
            need_m(m)?;
            let mut gens: Vec<String> = (1..=m).map(a).collect();
            gens.extend(["sigma", "t", "tau", "T"].map(String::from));
            let mut rels = sigma_relators(m);
            rels.extend((1..=m).map(|j| comm("t", &a(j))));
            rels.push(comm("t", "T"));
            rels.push(comm("tau", "T"));
            rels.push(format!("tau^-1 t^-1 {0}^-1 tau {0} t", a(m)));
            rels.extend((1..m).map(|i| comm("tau", &a(i))));
            Shape { gens, rels }
        }
        Family::Um { m } => {
            need_m(m)?;
            let mut gens: Vec<String> = (1..=m).map(a).collect();
            gens.extend(["sigma".to_string(), "T".to_string()]);
            Shape { gens, rels: sigma_relators(m) }
        }
        Family::Skm { k, m } => {
            need_k(k)?;
            if m <= k {
                return Err(Error::Param(format!("Skm needs m > k, got k={k} m={m}")));
            }
            let p = shape_for(&Family::Pk { k })?;
            let q = shape_for(&Family::Qm { m })?;
            let mut gens = p.gens;
            gens.extend(q.gens.into_iter().filter(|g| g != "t"));
            let mut rels = p.rels;
            rels.extend(q.rels);
            Shape { gens, rels }
        }
        Family::Custom(_) => {
            return Err(Error::Param("custom presentations are not built by family".into()));
        }
    };
    Ok(shape)
}

pub fn build_presentation(family: &Family) -> Result<Presentation> {
    let shape = shape_for(family)?;
    let alphabet = Arc::new(Alphabet::new(shape.gens)?);
    let relators = shape
        .rels
        .iter()
        .map(|r| Word::parse(&alphabet, r))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(alphabet, relators, family.clone())
}

/// `<a_1..a_m, sigma | [a_i,a_j], sigma relations>`, the target of killing `T`, `t`, `tau`.
pub fn abelian_sigma_presentation(m: usize) -> Result<Presentation> {
    if m < 1 {
        return Err(Error::Param("m must be at least 1".into()));
    }
    let mut gens: Vec<String> = (1..=m).map(a).collect();
    gens.push("sigma".into());
    let mut rels = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            rels.push(comm(&a(i), &a(j)));
        }
    }
    rels.extend(sigma_relators(m));
    let alphabet = Arc::new(Alphabet::new(gens)?);
    let relators = rels
        .iter()
        .map(|r| Word::parse(&alphabet, r))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(alphabet, relators, Family::Custom(format!("Am m={m}")))
}

/// Infinite cyclic group on the single generator `x`.
pub fn cyclic_presentation(x: &str) -> Result<Presentation> {
    let alphabet = Arc::new(Alphabet::new([x])?);
    Presentation::new(alphabet, Vec::new(), Family::Custom(format!("Z<{x}>")))
}

/// A letter map together with the presentations it runs between.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub name: String,
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub map: LetterMap,
}

impl Retraction {
    /// Relator condition: each relator image reduces to empty or to a target relator conjugate.
    pub fn check(&self) -> Result<()> {
        for r in self.source.relators() {
            let img = reduce_letters(&self.map.map_letters(r.letters()));
            if !img.is_empty() && !self.target.is_relator_conjugate(&img) {
                return Err(Error::Precondition(format!(
                    "{}: relator {} maps to {}, which is not a relator of the target",
                    self.name,
                    r,
                    self.target.alphabet().format_letters(&img)
                )));
            }
        }
        Ok(())
    }

    pub fn new(
        name: &str,
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        map: LetterMap,
    ) -> Result<Self> {
        let r = Retraction { name: name.to_string(), source, target, map };
        r.check()?;
        Ok(r)
    }

    pub fn identity(p: Arc<Presentation>) -> Self {
        let map = LetterMap::identity(p.alphabet().clone());
        Retraction { name: "identity".into(), source: p.clone(), target: p, map }
    }

    /// Kills every generator except `keep`, landing in the infinite cyclic group.
    pub fn onto_generator(source: Arc<Presentation>, keep: &str) -> Result<Self> {
        source.sym(keep)?;
        let target = Arc::new(cyclic_presentation(keep)?);
        let map = LetterMap::by_name(source.alphabet().clone(), target.alphabet().clone());
        let r = Retraction::new(&format!("phi_{keep}"), source, target, map)?;
        r.check_exponent_zero()?;
        Ok(r)
    }

    /// For maps onto a cyclic group: every relator image has exponent sum zero.
    pub fn check_exponent_zero(&self) -> Result<()> {
        if self.target.alphabet().len() != 1 {
            return Err(Error::Precondition(format!("{} does not map onto one generator", self.name)));
        }
        for r in self.source.relators() {
            let e: i64 = self.map.map_letters(r.letters()).iter().map(|l| l.sign()).sum();
            if e != 0 {
                return Err(Error::Precondition(format!(
                    "{}: relator {} has image exponent sum {e}; not a retraction to Z",
                    self.name, r
                )));
            }
        }
        Ok(())
    }
}

fn named_map(source: &Presentation, target: &Presentation, f: impl Fn(&str) -> Option<String>) -> Result<LetterMap> {
    let images = source
        .alphabet()
        .symbols()
        .iter()
        .map(|n| match f(n) {
            None => Ok(Image::Erase),
            Some(t) => Ok(Image::Letter(Letter::pos(target.sym(&t)?))),
        })
        .collect::<Result<Vec<_>>>()?;
    LetterMap::new(source.alphabet().clone(), target.alphabet().clone(), images)
}

/// Builds a named retraction out of the given source presentation.
///
/// `psi` and `psi_hat` need a `Pk` source, `kill_t_tau` and `kill_T_t_tau` a `Qm` source,
/// `phi_t` any source whose relators have zero `t`-exponent, `phi:<x>` the same for `x`.
pub fn retraction(name: &str, source: Arc<Presentation>) -> Result<Retraction> {
    let fam = source.family().clone();
    match name {
        "identity" => Ok(Retraction::identity(source)),
        "psi" | "psi_hat" => {
            let k = match fam {
                Family::Pk { k } => k,
                _ => return Err(Error::WrongFamily(format!("{name} needs a Pk source, got {fam}"))),
            };
            if name == "psi" {
                let target = Arc::new(build_presentation(&Family::Ok { k })?);
                let sk = s(k);
                let map = named_map(&source, &target, |n| match n {
                    "t" => Some(sk.clone()),
                    "f" | "g" => Some(n.to_string()),
                    _ if n.starts_with('s') => Some(n.to_string()),
                    _ => None,
                })?;
                Retraction::new(name, source, target, map)
            } else {
                let target = Arc::new(build_presentation(&Family::HatOk { k })?);
                let map = named_map(&source, &target, |n| {
                    if n.starts_with('h') {
                        Some(n.to_string())
                    } else {
                        None
                    }
                })?;
                Retraction::new(name, source, target, map)
            }
        }
        "kill_t_tau" | "kill_T_t_tau" => {
            let m = match fam {
                Family::Qm { m } => m,
                _ => return Err(Error::WrongFamily(format!("{name} needs a Qm source, got {fam}"))),
            };
            let target = if name == "kill_t_tau" {
                Arc::new(build_presentation(&Family::Um { m })?)
            } else {
                Arc::new(abelian_sigma_presentation(m)?)
            };
            let map = LetterMap::by_name(source.alphabet().clone(), target.alphabet().clone());
            Retraction::new(name, source, target, map)
        }
        "phi_t" => Retraction::onto_generator(source, "t"),
        other => {
            if let Some(x) = other.strip_prefix("phi:").or_else(|| other.strip_prefix("phi_")) {
                Retraction::onto_generator(source, x)
            } else {
                Err(Error::Param(format!("unknown retraction {other}")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ok2_relators() {
        let p = build_presentation(&Family::Ok { k: 2 }).unwrap();
        assert_eq!(p.alphabet().symbols(), &["s1", "s2", "f", "g"]);
        let rels: Vec<String> = p.relators().iter().map(|r| r.to_string()).collect();
        assert_eq!(
            rels,
            vec![
                "f^-1 s2 f s2^-1",
                "f^-1 s1 f s2^-1 s1^-1",
                "g^-1 s2 g s2^-1",
                "g^-1 s1 g s1^-1",
                "s1^-1 s2^-1 s1 s2",
            ]
        );
    }

    #[test]
    fn j_and_counts() {
        let j = build_presentation(&Family::J).unwrap();
        assert_eq!(j.alphabet().len(), 4);
        assert_eq!(j.relators().len(), 3);
        let skm = build_presentation(&Family::Skm { k: 2, m: 3 }).unwrap();
        let p = build_presentation(&Family::Pk { k: 2 }).unwrap();
        let q = build_presentation(&Family::Qm { m: 3 }).unwrap();
        let shared: Vec<&String> =
            p.alphabet().symbols().iter().filter(|g| q.alphabet().index(g).is_some()).collect();
        assert_eq!(shared, vec!["t"]);
        assert_eq!(skm.alphabet().len(), p.alphabet().len() + q.alphabet().len() - 1);
        assert_eq!(skm.relators().len(), 5 + 5 + 3 + q.relators().len());
        assert!(build_presentation(&Family::Skm { k: 3, m: 3 }).is_err());
        assert!(build_presentation(&Family::Ok { k: 1 }).is_err());
    }

    #[test]
    fn retractions_pass_relator_check() {
        let pk = Arc::new(build_presentation(&Family::Pk { k: 2 }).unwrap());
        let psi = retraction("psi", pk.clone()).unwrap();
        let t = pk.word("t").unwrap();
        assert_eq!(psi.map.map_word(&t).unwrap().to_string(), "s2");
        assert_eq!(psi.map.map_word(&pk.word("b hf hs1").unwrap()).unwrap().len(), 0);
        retraction("psi_hat", pk.clone()).unwrap();
        let q2 = Arc::new(build_presentation(&Family::Qm { m: 2 }).unwrap());
        retraction("phi_t", q2.clone()).unwrap();
        retraction("kill_t_tau", q2.clone()).unwrap();
        retraction("kill_T_t_tau", q2).unwrap();
        assert!(retraction("phi_t", pk.clone()).is_err());
        assert!(retraction("nope", pk).is_err());
        let ok = Arc::new(build_presentation(&Family::Ok { k: 3 }).unwrap());
        let id = Retraction::identity(ok.clone());
        for r in ok.relators() {
            assert_eq!(id.map.map_word(r).unwrap(), *r);
        }
    }

    #[test]
    fn text_round_trip() {
        let p = build_presentation(&Family::Qm { m: 2 }).unwrap();
        let q = Presentation::parse_text("x", &p.to_text()).unwrap();
        assert_eq!(q.to_text(), p.to_text());
    }
}
