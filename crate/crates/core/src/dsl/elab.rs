//! Name resolution and validation: turns a parsed [`Program`] into library
//! objects and typed queries.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use super::ast::{Arg, Expr, MfDecl, Program, Stmt, StmtKind};
use super::lexer::{err_at, Pos};
use crate::error::{Error, Result};
use crate::mf::MatrixFactorization;
use crate::poly::{GradedRing, Poly, Ring};
use crate::push::SectionData;
use crate::scalar::Field;
use crate::verify::{Convention, DeltaBase, DualityConvention};

/// Query option names. They take the following argument as their value and
/// cannot be used as object names.
pub const KEYWORDS: [&str; 8] = [
    "twist", "twists", "shift", "shifts", "section", "delta", "sign", "index",
];

#[derive(Clone, Debug)]
enum Binding {
    Ring(Ring),
    Section(SectionData),
    Mf(MatrixFactorization),
}

impl Binding {
    fn what(&self) -> &'static str {
        match self {
            Binding::Ring(_) => "ring",
            Binding::Section(_) => "section",
            Binding::Mf(_) => "factorization",
        }
    }
}

/// Everything a program declares, in one namespace.
#[derive(Clone, Debug)]
pub struct Env {
    field: Field,
    names: BTreeMap<String, Binding>,
    sections: Vec<String>,
}

fn at(pos: Pos, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::At { .. } => e,
        e => Error::At {
            line: pos.line,
            column: pos.column,
            inner: Box::new(e),
        },
    }
}

impl Env {
    pub fn field(&self) -> Field {
        self.field
    }

    fn get(&self, pos: Pos, name: &str) -> Result<&Binding> {
        self.names
            .get(name)
            .ok_or_else(|| err_at(pos, format!("unbound name `{name}`")))
    }

    pub fn ring(&self, pos: Pos, name: &str) -> Result<&Ring> {
        match self.get(pos, name)? {
            Binding::Ring(r) => Ok(r),
            b => Err(err_at(
                pos,
                format!("`{name}` is a {}, expected a ring", b.what()),
            )),
        }
    }

    pub fn section(&self, pos: Pos, name: &str) -> Result<&SectionData> {
        match self.get(pos, name)? {
            Binding::Section(s) => Ok(s),
            b => Err(err_at(
                pos,
                format!("`{name}` is a {}, expected a section", b.what()),
            )),
        }
    }

    pub fn mf(&self, pos: Pos, name: &str) -> Result<&MatrixFactorization> {
        match self.get(pos, name)? {
            Binding::Mf(m) => Ok(m),
            b => Err(err_at(
                pos,
                format!("`{name}` is a {}, expected a factorization", b.what()),
            )),
        }
    }

    /// The unique section whose base ring and `f` match `e`.
    pub fn default_section(
        &self,
        pos: Pos,
        e: &MatrixFactorization,
    ) -> Result<(&str, &SectionData)> {
        let found: Vec<(&str, &SectionData)> = self
            .sections
            .iter()
            .filter_map(|n| match &self.names[n] {
                Binding::Section(s) if s.base() == e.ring() && s.f() == e.potential() => {
                    Some((n.as_str(), s))
                }
                _ => None,
            })
            .collect();
        match found.as_slice() {
            [one] => Ok(*one),
            [] => Err(err_at(
                pos,
                format!("no section matches f = {}", e.potential()),
            )),
            _ => Err(err_at(
                pos,
                format!(
                    "several sections match f = {}; pass `section <name>`",
                    e.potential()
                ),
            )),
        }
    }

    fn bind(&mut self, pos: Pos, name: &str, b: Binding) -> Result<()> {
        if KEYWORDS.contains(&name) {
            return Err(err_at(pos, format!("`{name}` is reserved")));
        }
        if let Some(old) = self.names.get(name) {
            return Err(err_at(
                pos,
                format!("`{name}` is already declared as a {}", old.what()),
            ));
        }
        if matches!(b, Binding::Section(_)) {
            self.sections.push(name.to_string());
        }
        self.names.insert(name.to_string(), b);
        Ok(())
    }

    /// Ring named in `over (X, f)`: a ring, or the extended ring of a section.
    fn carrier(&self, pos: Pos, name: &str) -> Result<&Ring> {
        match self.get(pos, name)? {
            Binding::Ring(r) => Ok(r),
            Binding::Section(s) => Ok(s.ext()),
            b => Err(err_at(
                pos,
                format!("`{name}` is a {}, expected a ring", b.what()),
            )),
        }
    }

    fn mf_decl(&self, pos: Pos, m: &MfDecl) -> Result<MatrixFactorization> {
        let ring = self.carrier(pos, &m.ring)?.clone();
        let f = m.f.eval(&ring).map_err(|e| at(pos, e))?;
        let eval = |rows: &[Vec<Expr>]| -> Result<Vec<Vec<Poly>>> {
            rows.iter()
                .map(|r| r.iter().map(|x| x.eval(&ring)).collect())
                .collect()
        };
        let phi = eval(&m.phi).map_err(|e| at(pos, e))?;
        let psi = eval(&m.psi).map_err(|e| at(pos, e))?;
        MatrixFactorization::from_polys(&f, m.d.clone(), m.e.clone(), phi, psi).map_err(|e| {
            at(
                pos,
                Error::Factorization(format!("`{}`: {}", m.name, strip_kind(&e))),
            )
        })
    }
}

/// The message of an error without its category prefix.
fn strip_kind(e: &Error) -> String {
    match e {
        Error::Factorization(s)
        | Error::Degree(s)
        | Error::Shape(s)
        | Error::RingMismatch(s)
        | Error::Invalid(s) => s.clone(),
        e => e.to_string(),
    }
}

/// Positional arguments and `keyword value` options of one query.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryArgs {
    pub positional: Vec<Arg>,
    pub options: BTreeMap<String, Arg>,
}

impl QueryArgs {
    pub fn parse(pos: Pos, args: &[Arg]) -> Result<QueryArgs> {
        let mut out = QueryArgs::default();
        let mut it = args.iter();
        while let Some(a) = it.next() {
            match a {
                Arg::Name(k) if KEYWORDS.contains(&k.as_str()) => {
                    let v = it
                        .next()
                        .ok_or_else(|| err_at(pos, format!("option `{k}` needs a value")))?;
                    if out.options.insert(k.clone(), v.clone()).is_some() {
                        return Err(err_at(pos, format!("option `{k}` given twice")));
                    }
                }
                a => out.positional.push(a.clone()),
            }
        }
        Ok(out)
    }

    pub fn int(&self, pos: Pos, key: &str, default: i64) -> Result<i64> {
        match self.options.get(key) {
            None => Ok(default),
            Some(Arg::Int(k)) => Ok(*k),
            Some(a) => Err(err_at(
                pos,
                format!("option `{key}` expects an integer, got `{a}`"),
            )),
        }
    }

    pub fn range(
        &self,
        pos: Pos,
        key: &str,
        default: RangeInclusive<i64>,
    ) -> Result<RangeInclusive<i64>> {
        match self.options.get(key) {
            None => Ok(default),
            Some(Arg::Range(a, b)) if a <= b => Ok(*a..=*b),
            Some(Arg::Int(k)) => Ok(*k..=*k),
            Some(a) => Err(err_at(
                pos,
                format!("option `{key}` expects a range a..b, got `{a}`"),
            )),
        }
    }

    pub fn name(&self, key: &str) -> Option<&str> {
        match self.options.get(key) {
            Some(Arg::Name(n)) => Some(n),
            _ => None,
        }
    }

    pub fn convention(&self, pos: Pos, default: Convention) -> Result<Convention> {
        let sign = self.int(pos, "sign", 1)?;
        let base = match self.options.get("delta") {
            None => {
                if self.options.contains_key("sign") {
                    return Err(err_at(pos, "option `sign` requires `delta`"));
                }
                return Ok(default);
            }
            Some(Arg::Name(n)) if n == "auto" => {
                if self.options.contains_key("sign") {
                    return Err(err_at(
                        pos,
                        "option `sign` cannot be combined with `delta auto`",
                    ));
                }
                return Ok(Convention::Auto);
            }
            Some(Arg::Name(n)) if n == "ambient" => DeltaBase::Ambient,
            Some(Arg::Name(n)) if n == "quotient" => DeltaBase::Quotient,
            Some(a) => {
                return Err(err_at(
                    pos,
                    format!("option `delta` expects auto, ambient or quotient, got `{a}`"),
                ))
            }
        };
        Ok(Convention::Fixed(
            DualityConvention::new(base, sign).map_err(|e| at(pos, e))?,
        ))
    }

    fn allow(&self, pos: Pos, keys: &[&str]) -> Result<()> {
        match self.options.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(err_at(
                pos,
                format!("option `{k}` does not apply to this query"),
            )),
            None => Ok(()),
        }
    }
}

/// A named factorization as used by a query.
#[derive(Clone, Debug)]
pub struct Object {
    pub name: String,
    pub mf: MatrixFactorization,
}

#[derive(Clone, Debug)]
pub struct NamedSection {
    pub name: String,
    pub data: SectionData,
}

#[derive(Clone, Debug)]
pub enum Query {
    Hom {
        source: Object,
        target: Object,
        twist: i64,
        shift: i64,
    },
    HomTable {
        source: Object,
        target: Object,
        twists: RangeInclusive<i64>,
        shifts: RangeInclusive<i64>,
    },
    Push {
        object: Object,
        section: NamedSection,
    },
    VerifyTheorem {
        source: Object,
        target: Object,
        section: NamedSection,
        shifts: RangeInclusive<i64>,
        twists: RangeInclusive<i64>,
        convention: Convention,
    },
    VerifySerre {
        source: Object,
        target: Object,
        twists: RangeInclusive<i64>,
        convention: Convention,
    },
    /// Module-side dimension; over the section's ring when `section` is set.
    Oracle {
        source: Object,
        target: Object,
        twist: i64,
        index: i64,
        section: Option<NamedSection>,
    },
    Transpose {
        ring: String,
        poly: Poly,
    },
    Directed {
        objects: Vec<Object>,
        section: NamedSection,
        convention: DualityConvention,
    },
}

/// A query with its source text and position.
#[derive(Clone, Debug)]
pub struct TypedQuery {
    pub pos: Pos,
    pub text: String,
    pub kind: String,
    pub query: Query,
}

pub const QUERY_KINDS: [&str; 8] = [
    "hom",
    "homtable",
    "push",
    "verify-theorem",
    "verify-serre",
    "oracle",
    "transpose",
    "directed",
];

pub const DEFAULT_CONVENTION: DualityConvention = DualityConvention {
    delta: DeltaBase::Quotient,
    sign: 1,
};

impl Env {
    /// Elaborates every declaration and query. `field` overrides the
    /// program's own field declaration.
    pub fn elaborate(program: &Program, field: Option<Field>) -> Result<(Env, Vec<TypedQuery>)> {
        let mut env = Env {
            field: field.unwrap_or(Field::Rationals),
            names: BTreeMap::new(),
            sections: Vec::new(),
        };
        let mut declared_field = false;
        let mut queries = Vec::new();
        for Stmt { pos, kind } in &program.stmts {
            let pos = *pos;
            match kind {
                StmtKind::Field(k) => {
                    if declared_field {
                        return Err(err_at(pos, "only one field declaration is allowed"));
                    }
                    if !env.names.is_empty() {
                        return Err(err_at(pos, "the field must be declared before any ring"));
                    }
                    declared_field = true;
                    if field.is_none() {
                        env.field = *k;
                    }
                }
                StmtKind::Ring { name, vars } => {
                    let names: Vec<&str> = vars.iter().map(|(v, _)| v.as_str()).collect();
                    let weights: Vec<i64> = vars.iter().map(|(_, w)| *w).collect();
                    let ring =
                        GradedRing::new(&names, &weights, env.field).map_err(|e| at(pos, e))?;
                    env.bind(pos, name, Binding::Ring(ring))?;
                }
                StmtKind::Section {
                    name,
                    ring,
                    wname,
                    weight,
                    f,
                    g,
                } => {
                    let base = env.ring(pos, ring)?.clone();
                    let ext = base.extend(wname, *weight).map_err(|e| at(pos, e))?;
                    let fp = f.eval(&ext).map_err(|e| at(pos, e))?;
                    let gp = g.eval(&ext).map_err(|e| at(pos, e))?;
                    let sec = SectionData::new(&base, wname, *weight, &fp, &gp)
                        .map_err(|e| at(pos, e))?;
                    env.bind(pos, name, Binding::Section(sec))?;
                }
                StmtKind::Mf(m) => {
                    let mf = env.mf_decl(pos, m)?;
                    env.bind(pos, &m.name, Binding::Mf(mf))?;
                }
                StmtKind::Query { kind: qk, args } => {
                    let query = env.query(pos, qk, args)?;
                    queries.push(TypedQuery {
                        pos,
                        text: kind.to_string(),
                        kind: qk.clone(),
                        query,
                    });
                }
            }
        }
        Ok((env, queries))
    }

    fn object(&self, pos: Pos, arg: &Arg) -> Result<Object> {
        match arg {
            Arg::Name(n) => Ok(Object {
                name: n.clone(),
                mf: self.mf(pos, n)?.clone(),
            }),
            a => Err(err_at(
                pos,
                format!("expected a factorization name, got `{a}`"),
            )),
        }
    }

    fn objects(&self, pos: Pos, qa: &QueryArgs, count: Option<usize>) -> Result<Vec<Object>> {
        if let Some(k) = count {
            if qa.positional.len() != k {
                return Err(err_at(
                    pos,
                    format!("expected {k} factorization(s), got {}", qa.positional.len()),
                ));
            }
        }
        let objs = qa
            .positional
            .iter()
            .map(|a| self.object(pos, a))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = objs.first() {
            for o in &objs[1..] {
                first.mf.check_compatible(&o.mf).map_err(|e| at(pos, e))?;
            }
        }
        Ok(objs)
    }

    fn section_for(
        &self,
        pos: Pos,
        qa: &QueryArgs,
        e: &MatrixFactorization,
    ) -> Result<NamedSection> {
        let (name, data) = match qa.name("section") {
            Some(n) => (n, self.section(pos, n)?),
            None if qa.options.contains_key("section") => {
                return Err(err_at(pos, "option `section` expects a name"))
            }
            None => self.default_section(pos, e)?,
        };
        if data.base() != e.ring() || data.f() != e.potential() {
            return Err(err_at(
                pos,
                format!("section `{name}` does not match f = {}", e.potential()),
            ));
        }
        Ok(NamedSection {
            name: name.to_string(),
            data: data.clone(),
        })
    }

    fn query(&self, pos: Pos, kind: &str, args: &[Arg]) -> Result<Query> {
        let qa = QueryArgs::parse(pos, args)?;
        let pair = |qa: &QueryArgs| -> Result<(Object, Object)> {
            let mut o = self.objects(pos, qa, Some(2))?.into_iter();
            Ok((o.next().unwrap(), o.next().unwrap()))
        };
        Ok(match kind {
            "hom" => {
                qa.allow(pos, &["twist", "shift"])?;
                let (source, target) = pair(&qa)?;
                Query::Hom {
                    source,
                    target,
                    twist: qa.int(pos, "twist", 0)?,
                    shift: qa.int(pos, "shift", 0)?,
                }
            }
            "homtable" => {
                qa.allow(pos, &["twists", "shifts"])?;
                let (source, target) = pair(&qa)?;
                Query::HomTable {
                    source,
                    target,
                    twists: qa.range(pos, "twists", -3..=3)?,
                    shifts: qa.range(pos, "shifts", 0..=1)?,
                }
            }
            "push" => {
                qa.allow(pos, &["section"])?;
                let object = self.objects(pos, &qa, Some(1))?.remove(0);
                let section = self.section_for(pos, &qa, &object.mf)?;
                Query::Push { object, section }
            }
            "verify-theorem" => {
                qa.allow(pos, &["section", "shifts", "twists", "delta", "sign"])?;
                let (source, target) = pair(&qa)?;
                let section = self.section_for(pos, &qa, &source.mf)?;
                let h = section.data.h();
                Query::VerifyTheorem {
                    shifts: qa.range(pos, "shifts", -3..=3)?,
                    twists: qa.range(pos, "twists", -(h + 2)..=h + 2)?,
                    convention: qa.convention(pos, Convention::Auto)?,
                    source,
                    target,
                    section,
                }
            }
            "verify-serre" => {
                qa.allow(pos, &["twists", "delta", "sign"])?;
                let (source, target) = pair(&qa)?;
                let h = source.mf.degree();
                Query::VerifySerre {
                    twists: qa.range(pos, "twists", -(h + 2)..=h + 2)?,
                    convention: qa.convention(pos, Convention::Auto)?,
                    source,
                    target,
                }
            }
            "oracle" => {
                qa.allow(pos, &["twist", "index", "section"])?;
                let (source, target) = pair(&qa)?;
                let section = if qa.options.contains_key("section") {
                    Some(self.section_for(pos, &qa, &source.mf)?)
                } else {
                    None
                };
                let index = qa.int(pos, "index", 0)?;
                if index < 0 || (index > 0 && section.is_some()) {
                    return Err(err_at(
                        pos,
                        "oracle index must be 0, or positive without a section",
                    ));
                }
                Query::Oracle {
                    twist: qa.int(pos, "twist", 0)?,
                    index,
                    source,
                    target,
                    section,
                }
            }
            "transpose" => {
                qa.allow(pos, &[])?;
                match qa.positional.as_slice() {
                    [Arg::Poly { ring, expr }] => {
                        let r = self.ring(pos, ring)?;
                        Query::Transpose {
                            ring: ring.clone(),
                            poly: expr.eval(r).map_err(|e| at(pos, e))?,
                        }
                    }
                    _ => return Err(err_at(pos, "transpose expects one argument `(Ring, poly)`")),
                }
            }
            "directed" => {
                qa.allow(pos, &["section", "delta", "sign"])?;
                let objects = self.objects(pos, &qa, None)?;
                let first = objects
                    .first()
                    .ok_or_else(|| err_at(pos, "directed expects at least one factorization"))?;
                let section = self.section_for(pos, &qa, &first.mf)?;
                let convention = match qa.convention(pos, Convention::Fixed(DEFAULT_CONVENTION))? {
                    Convention::Fixed(c) => c,
                    Convention::Auto => {
                        return Err(err_at(
                            pos,
                            "directed needs a fixed convention, not `delta auto`",
                        ))
                    }
                };
                Query::Directed {
                    objects,
                    section,
                    convention,
                }
            }
            other => {
                return Err(err_at(
                    pos,
                    format!(
                        "unknown query kind `{other}`; expected one of {}",
                        QUERY_KINDS.join(", ")
                    ),
                ))
            }
        })
    }
}
