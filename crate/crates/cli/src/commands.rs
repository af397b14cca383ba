use std::fmt::Write;

use serde::Serialize;

use sepcomp::code::{code_automorphisms, monomial_equivalence, CodeError, LinearCode, MonomialWitness};
use sepcomp::fgroup::{FGroupError, FunctionGroup, NormalityConfig};
use sepcomp::hom::{
    CheckStatus, GroupHom, HomError, HypothesisCheck, PartialMorphism, RepresentOptions, Representation,
};
use sepcomp::{GroupMorphism, Subset, Workspace, WorkspaceError};

/// A nonzero exit: `ERR <code> <kind>: <message>`.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn input(kind: &str, message: String) -> Self {
        Failure { code: 4, kind: kind.into(), message }
    }

    fn hypothesis(kind: &str, message: String) -> Self {
        Failure { code: 2, kind: kind.into(), message }
    }
}

impl From<WorkspaceError> for Failure {
    fn from(e: WorkspaceError) -> Self {
        Failure::input(e.kind(), e.to_string())
    }
}

fn fgroup_failure(e: &FGroupError) -> Failure {
    let kind = match e {
        FGroupError::TooLarge(_) => "ClosureTooLarge",
        FGroupError::FamilyTooLarge(_) => "FamilyTooLarge",
        FGroupError::SearchBoundExceeded { .. } => "SearchBoundExceeded",
        _ => "InvalidFunctionGroup",
    };
    Failure::input(kind, e.to_string())
}

/// Names the maps behind element indices in hom errors.
fn hom_failure(e: HomError, h: &GroupHom) -> Failure {
    let (a, b) = (h.source(), h.target());
    let pair = |src: &FunctionGroup, f: usize, g: usize| format!("{} and {}", src.element(f), src.element(g));
    match e {
        HomError::NotWeaklySeparating { f, g } => Failure::hypothesis(
            "NotWeaklySeparating",
            format!("{} are detached but their images are not", pair(a, f, g)),
        ),
        HomError::NotSeparating { f, g } => Failure::hypothesis(
            "NotSeparating",
            format!("{} are separated but their images are not", pair(a, f, g)),
        ),
        HomError::NotBiseparating { inverse, f, g } => {
            let (src, dir) = if inverse { (b, "inverse") } else { (a, "forward") };
            Failure::hypothesis(
                "NotBiseparating",
                format!("{dir} map: {} are detached but their images are not", pair(src, f, g)),
            )
        }
        HomError::NotWellDefined { f, g, y } => Failure::hypothesis(
            "NotWellDefined",
            format!("at point {y}: {} agree at h({y}) but their images differ", pair(a, f, g)),
        ),
        HomError::NonSingletonSupport { y, minimal } => Failure::hypothesis(
            "NonSingletonSupport",
            format!("point {y}: minimal supports {}", join(minimal.iter().map(Subset::to_string))),
        ),
        HomError::HypothesisFailed { hypothesis, detail } => {
            Failure::hypothesis("HypothesisFailed", format!("{hypothesis}: {detail}"))
        }
        HomError::FunctionGroup(e) => fgroup_failure(&e),
        HomError::TheoremViolation(m) => Failure { code: 1, kind: "TheoremViolation".into(), message: m },
        e @ (HomError::NotBijective { .. }
        | HomError::NullHomomorphism
        | HomError::NoInjectiveSupportChoice
        | HomError::SupportSearchTooLarge(_)) => {
            let kind = match e {
                HomError::NotBijective { .. } => "NotBijective",
                HomError::NullHomomorphism => "NullHomomorphism",
                HomError::NoInjectiveSupportChoice => "NoInjectiveSupportChoice",
                _ => "SupportSearchTooLarge",
            };
            Failure::hypothesis(kind, e.to_string())
        }
        e => Failure::input("InvalidHomomorphism", e.to_string()),
    }
}

fn code_failure(e: CodeError) -> Failure {
    match e {
        CodeError::FieldMismatch(..) => Failure::input("FieldMismatch", e.to_string()),
        CodeError::LengthMismatch(..) => Failure::input("LengthMismatch", e.to_string()),
        e => Failure::input("InvalidCode", e.to_string()),
    }
}

fn join<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().collect::<Vec<_>>().join(" ")
}

fn values(v: &[u8]) -> String {
    join(v.iter().map(ToString::to_string))
}

fn check_line(c: &HypothesisCheck) -> String {
    match &c.status {
        CheckStatus::Holds => format!("  {}: holds", c.name),
        CheckStatus::Fails(d) => format!("  {}: fails ({d})", c.name),
        CheckStatus::Skipped => format!("  {}: not checked", c.name),
    }
}

/// `id`, or the image table `[w(0) w(1) ...]`.
fn morphism_text(w: &GroupMorphism) -> String {
    if w.image().iter().enumerate().all(|(i, &v)| i == v as usize) {
        "id".into()
    } else {
        format!("[{}]", values(w.image()))
    }
}

fn partial_text(w: &PartialMorphism) -> String {
    let pairs = w.domain().iter().map(|&a| format!("{a}->{}", w.apply(a).expect("on the domain")));
    format!("partial {{{}}}", pairs.collect::<Vec<_>>().join(", "))
}

#[derive(Serialize)]
struct Flag<W: Serialize> {
    holds: bool,
    witness: Option<W>,
}

#[derive(Serialize)]
struct ControlJson {
    f: Vec<u8>,
    d1: Subset,
    d2: Subset,
}

#[derive(Serialize)]
struct NormalJson {
    d1: Subset,
    d2: Subset,
    x: usize,
    y: usize,
}

#[derive(Serialize)]
struct AnalyzeJson {
    name: String,
    order: usize,
    domain: usize,
    faithful: Flag<usize>,
    separates_points: Flag<(usize, usize)>,
    pointwise_dense: Flag<usize>,
    controllable: Flag<ControlJson>,
    normal: Flag<NormalJson>,
    d_lattice_size: usize,
}

#[derive(Serialize)]
struct WeightJson {
    y: usize,
    h: Option<usize>,
    /// Image table over all of `G` when defined everywhere.
    table: Option<Vec<u8>>,
    /// `(a, w(a))` on the subgroup where `w` is defined.
    partial: Option<Vec<(u8, u8)>>,
}

#[derive(Serialize)]
struct RepresentJson {
    name: String,
    h: Vec<Option<usize>>,
    dropped: Vec<usize>,
    weights: Vec<WeightJson>,
    verified: bool,
    contains_constants: bool,
    hypotheses: Vec<HypothesisCheck>,
    inverse: Option<InverseJson>,
}

#[derive(Serialize)]
struct InverseJson {
    k: Vec<usize>,
    rho: Vec<Vec<u8>>,
}

#[derive(Serialize)]
struct EquivJson<'a> {
    code1: &'a str,
    code2: &'a str,
    equivalent: bool,
    witness: Option<MonomialWitness>,
}

#[derive(Serialize)]
struct AutJson<'a> {
    code: &'a str,
    count: usize,
    automorphisms: Vec<MonomialWitness>,
}

#[derive(Serialize)]
struct WenumJson<'a> {
    code: &'a str,
    p: usize,
    n: usize,
    k: usize,
    enumerator: Vec<u64>,
}

pub struct Context<'a> {
    pub ws: &'a Workspace,
    pub json: bool,
}

impl Context<'_> {
    fn emit<T: Serialize>(&self, value: &T, out: &mut String) {
        out.push_str(&serde_json::to_string_pretty(value).expect("serializable"));
        out.push('\n');
    }

    fn fgroup(&self, name: &str) -> Result<&FunctionGroup, Failure> {
        self.ws
            .fgroup(name)
            .map(|a| a.as_ref())
            .ok_or_else(|| Failure::input("UnknownName", format!("`{name}` is not a function group or code")))
    }

    fn code(&self, name: &str) -> Result<&LinearCode, Failure> {
        self.ws.code(name).ok_or_else(|| Failure::input("UnknownName", format!("`{name}` is not a code")))
    }

    fn hom(&self, name: &str) -> Result<&GroupHom, Failure> {
        self.ws.hom(name).ok_or_else(|| Failure::input("UnknownName", format!("`{name}` is not a homomorphism")))
    }

    pub fn analyze(&self, names: &[String], out: &mut String) -> Result<(), Failure> {
        let mut docs = Vec::new();
        for name in names {
            let a = self.fgroup(name)?;
            let control = a.control_violation().map_err(|e| fgroup_failure(&e))?;
            let normal = match a.normality_violation(NormalityConfig::default()) {
                Ok(v) => Ok(v),
                Err(FGroupError::SearchBoundExceeded { .. }) => Err(()),
                Err(e) => return Err(fgroup_failure(&e)),
            };
            let d_size = a.d_lattice().map_err(|e| fgroup_failure(&e))?.len();
            let report = AnalyzeJson {
                name: name.clone(),
                order: a.len(),
                domain: a.domain_size(),
                faithful: Flag { holds: a.is_faithful(), witness: a.first_uncovered_point() },
                separates_points: Flag { holds: a.separates_points(), witness: a.first_unseparated_pair() },
                pointwise_dense: Flag { holds: a.is_pointwise_dense(), witness: a.first_sparse_point() },
                controllable: Flag {
                    holds: control.is_none(),
                    witness: control.map(|v| ControlJson { f: a.element(v.f).values().to_vec(), d1: v.d1, d2: v.d2 }),
                },
                normal: Flag {
                    holds: matches!(normal, Ok(None)),
                    witness: normal.ok().flatten().map(|v| NormalJson { d1: v.d1, d2: v.d2, x: v.x, y: v.y }),
                },
                d_lattice_size: d_size,
            };
            if self.json {
                docs.push(serde_json::to_value(&report).expect("serializable"));
                continue;
            }
            writeln!(out, "fgroup: {name}").unwrap();
            writeln!(out, "order: {}", report.order).unwrap();
            writeln!(out, "domain: {}", report.domain).unwrap();
            match report.faithful.witness {
                Some(x) => writeln!(out, "faithful: false (every map vanishes at {x})"),
                None => writeln!(out, "faithful: true"),
            }
            .unwrap();
            match report.separates_points.witness {
                Some((x, y)) => writeln!(out, "separates-points: false (points {x} and {y})"),
                None => writeln!(out, "separates-points: true"),
            }
            .unwrap();
            match report.pointwise_dense.witness {
                Some(x) => writeln!(out, "pointwise-dense: false (values at {x}: {})", values(&a.values_at(x))),
                None => writeln!(out, "pointwise-dense: true"),
            }
            .unwrap();
            match &report.controllable.witness {
                Some(w) => writeln!(
                    out,
                    "controllable: false (f={} D1={} D2={})",
                    a.element(control.unwrap().f),
                    w.d1,
                    w.d2
                ),
                None => writeln!(out, "controllable: true"),
            }
            .unwrap();
            match normal {
                Ok(None) => writeln!(out, "normal: true"),
                Ok(Some(v)) => writeln!(out, "normal: false (D1={} D2={} points {} and {})", v.d1, v.d2, v.x, v.y),
                Err(()) => writeln!(out, "normal: undecided (certificate exceeds the search bound)"),
            }
            .unwrap();
            writeln!(out, "d-lattice-size: {d_size}").unwrap();
        }
        if self.json {
            self.emit(&docs, out);
        }
        Ok(())
    }

    pub fn represent(&self, names: &[String], iso: bool, out: &mut String) -> Result<(), Failure> {
        let mut docs = Vec::new();
        for name in names {
            let h = self.hom(name)?;
            let (rep, inverse, mut hypotheses) = if iso {
                let r = h.represent_iso().map_err(|e| hom_failure(e, h))?;
                let inv = InverseJson { k: r.k.clone(), rho: r.inverse_weights.iter().map(|w| w.image().to_vec()).collect() };
                let hyp = r.hypotheses.clone();
                (r.forward, Some(inv), hyp)
            } else {
                let r = h.represent_with(RepresentOptions::default()).map_err(|e| hom_failure(e, h))?;
                let hyp = r.hypotheses.clone();
                (r, None, hyp)
            };
            hypotheses.push(HypothesisCheck { name: "weakly-separating".into(), status: CheckStatus::Holds });
            if iso {
                hypotheses.push(HypothesisCheck { name: "weakly-separating(inverse)".into(), status: CheckStatus::Holds });
            }
            let report = represent_json(name, &rep, inverse, hypotheses);
            if self.json {
                docs.push(serde_json::to_value(&report).expect("serializable"));
                continue;
            }
            writeln!(out, "hom: {name}").unwrap();
            let (a, b) = (h.source(), h.target());
            writeln!(out, "source: order {}, |X| = {}", a.len(), a.domain_size()).unwrap();
            writeln!(out, "target: order {}, |Y| = {}", b.len(), b.domain_size()).unwrap();
            let hs = rep.support.h.iter().map(|x| x.map_or("-".to_string(), |x| x.to_string()));
            writeln!(out, "h: {}", join(hs)).unwrap();
            let dropped = rep.support.dropped();
            if dropped.is_empty() {
                writeln!(out, "dropped: none").unwrap();
            } else {
                writeln!(out, "dropped: {}", join(dropped.iter().map(ToString::to_string))).unwrap();
            }
            for (y, w) in rep.composition.weights.iter().enumerate() {
                let Some(w) = w else { continue };
                let text = match &rep.endomorphisms[y] {
                    Some(m) => morphism_text(m),
                    None => partial_text(w),
                };
                writeln!(out, "w[{y}]: {text}").unwrap();
            }
            if let Some(inv) = &report.inverse {
                writeln!(out, "k: {}", join(inv.k.iter().map(ToString::to_string))).unwrap();
                for (x, rho) in inv.rho.iter().enumerate() {
                    let id = rho.iter().enumerate().all(|(i, &v)| i == v as usize);
                    writeln!(out, "rho[{x}]: {}", if id { "id".into() } else { format!("[{}]", values(rho)) }).unwrap();
                }
            }
            writeln!(out, "verified: {}", if rep.composition.verified { "yes" } else { "no" }).unwrap();
            writeln!(out, "contains-constants: {}", rep.contains_constants).unwrap();
            writeln!(out, "hypotheses:").unwrap();
            for c in &report.hypotheses {
                writeln!(out, "{}", check_line(c)).unwrap();
            }
        }
        if self.json {
            self.emit(&docs, out);
        }
        Ok(())
    }

    pub fn equiv(&self, n1: &str, n2: &str, out: &mut String) -> Result<(), Failure> {
        let (c1, c2) = (self.code(n1)?, self.code(n2)?);
        let witness = monomial_equivalence(c1, c2).map_err(code_failure)?;
        if self.json {
            self.emit(&EquivJson { code1: n1, code2: n2, equivalent: witness.is_some(), witness: witness.clone() }, out);
        } else {
            writeln!(out, "codes: {n1} {n2}").unwrap();
            writeln!(out, "equivalent: {}", witness.is_some()).unwrap();
            if let Some(w) = &witness {
                writeln!(out, "{w}").unwrap();
            }
        }
        match witness {
            Some(_) => Ok(()),
            None => Err(Failure {
                code: 3,
                kind: "NotEquivalent".into(),
                message: format!("no monomial map carries `{n1}` onto `{n2}`"),
            }),
        }
    }

    pub fn aut(&self, name: &str, out: &mut String) -> Result<(), Failure> {
        let c = self.code(name)?;
        let auts = code_automorphisms(c);
        if self.json {
            self.emit(&AutJson { code: name, count: auts.len(), automorphisms: auts }, out);
            return Ok(());
        }
        writeln!(out, "code: {name}").unwrap();
        writeln!(out, "automorphisms: {}", auts.len()).unwrap();
        for (i, w) in auts.iter().enumerate() {
            writeln!(out, "#{i} sigma: {} lambda: {}", join(w.sigma.iter().map(ToString::to_string)), values(&w.lambda))
                .unwrap();
        }
        Ok(())
    }

    pub fn wenum(&self, names: &[String], out: &mut String) -> Result<(), Failure> {
        let mut docs = Vec::new();
        for name in names {
            let c = self.code(name)?;
            let report = WenumJson { code: name, p: c.p(), n: c.n(), k: c.k(), enumerator: c.weight_enumerator() };
            if self.json {
                docs.push(serde_json::to_value(&report).expect("serializable"));
            } else {
                writeln!(out, "code: {name} [n={}, k={}, p={}]", c.n(), c.k(), c.p()).unwrap();
                writeln!(out, "weights: {}", join(report.enumerator.iter().map(ToString::to_string))).unwrap();
            }
        }
        if self.json {
            self.emit(&docs, out);
        }
        Ok(())
    }
}

fn represent_json(
    name: &str,
    rep: &Representation,
    inverse: Option<InverseJson>,
    hypotheses: Vec<HypothesisCheck>,
) -> RepresentJson {
    let weights = rep
        .composition
        .weights
        .iter()
        .enumerate()
        .map(|(y, w)| WeightJson {
            y,
            h: rep.support.h[y],
            table: rep.endomorphisms[y].as_ref().map(|m| m.image().to_vec()),
            partial: match (&rep.endomorphisms[y], w) {
                (None, Some(w)) => Some(w.domain().iter().map(|&a| (a, w.apply(a).expect("on the domain"))).collect()),
                _ => None,
            },
        })
        .collect();
    RepresentJson {
        name: name.to_string(),
        h: rep.support.h.clone(),
        dropped: rep.support.dropped(),
        weights,
        verified: rep.composition.verified,
        contains_constants: rep.contains_constants,
        hypotheses,
        inverse,
    }
}
