//! Output formats: human-readable text, JSON, and Mathematica input syntax
//! (explicit `*` and `^`, function heads with square brackets).

use calogero::characters::weight_label;
use calogero::coeffring::Rendered;
use calogero::verify::Report;
use calogero::{
    CSOperator, Coefficient, DecompositionSeries, DominantCharacter, DominantWeight, Engine, GeneralizedCGSeries,
    RootSystem, Style, ZPolynomial,
};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::{OperatorPart, OutputFormat};

pub struct Formatter<'a> {
    format: OutputFormat,
    engine: &'a Engine,
    rs: &'a RootSystem,
}

fn big(n: &BigInt) -> Value {
    i64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string()))
}

fn labels(w: &DominantWeight) -> Value {
    json!(w.labels())
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn line(s: String) -> String {
    s + "\n"
}

fn mathematica_list(items: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(", "))
}

impl<'a> Formatter<'a> {
    pub fn new(format: OutputFormat, engine: &'a Engine) -> Self {
        Formatter {
            format,
            engine,
            rs: engine.root_system(),
        }
    }

    fn style(&self) -> Style {
        match self.format {
            OutputFormat::Text => Style::Text,
            OutputFormat::Json | OutputFormat::Mathematica => Style::Explicit,
        }
    }

    fn atom(&self, head: &str, w: &DominantWeight) -> String {
        match self.format {
            OutputFormat::Mathematica => {
                let l: Vec<String> = w.labels().iter().map(i32::to_string).collect();
                format!("{head}[{}]", l.join(","))
            }
            _ => format!("{head}({})", weight_label(w)),
        }
    }

    /// `Σ c_w head(w)` in the order given.
    fn combination(&self, head: &str, terms: &[(DominantWeight, Rendered)]) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (w, r) in terms {
            if out.is_empty() {
                if r.negative {
                    out.push('-');
                }
            } else {
                out.push_str(if r.negative { " - " } else { " + " });
            }
            if !r.unit {
                out.push_str(&r.body);
                out.push_str(self.style().times());
            }
            out.push_str(&self.atom(head, w));
        }
        out
    }

    fn combination_json(&self, key: &str, terms: &[(DominantWeight, Rendered)]) -> Value {
        Value::Array(
            terms
                .iter()
                .map(|(w, r)| json!({ "weight": labels(w), key: r.signed() }))
                .collect(),
        )
    }

    fn dominance_order<C: Coefficient>(&self, top: &DominantWeight, map: &BTreeMap<DominantWeight, C>) -> Vec<(DominantWeight, Rendered)> {
        self.rs
            .dominant_weights_below(top)
            .into_iter()
            .filter_map(|w| map.get(&w).map(|c| (w.clone(), c.render(self.style()))))
            .collect()
    }

    pub fn algebra_info(&self) -> String {
        let rs = self.rs;
        let dims: Vec<BigInt> = (1..=rs.rank())
            .map(|i| rs.weyl_dimension(&DominantWeight::fundamental(rs.rank(), i)))
            .collect();
        let order = rs.weyl_group_order().to_string();
        match self.format {
            OutputFormat::Text => {
                let d: Vec<String> = dims.iter().map(BigInt::to_string).collect();
                format!(
                    "algebra {}\nrank {}\npositive roots {}\nWeyl group order {order}\nfundamental dimensions {}\n",
                    rs.algebra(),
                    rs.rank(),
                    rs.positive_roots().len(),
                    d.join(" ")
                )
            }
            OutputFormat::Json => pretty(json!({
                "algebra": rs.algebra().to_string(),
                "rank": rs.rank(),
                "positive_roots": rs.positive_roots().len(),
                "weyl_group_order": order,
                "fundamental_dimensions": dims.iter().map(big).collect::<Vec<_>>(),
            })),
            OutputFormat::Mathematica => line(format!(
                "<|\"algebra\" -> \"{}\", \"rank\" -> {}, \"positiveRoots\" -> {}, \"weylGroupOrder\" -> {order}, \"fundamentalDimensions\" -> {}|>",
                rs.algebra(),
                rs.rank(),
                rs.positive_roots().len(),
                mathematica_list(dims.iter().map(BigInt::to_string))
            )),
        }
    }

    pub fn orbit(&self, w: &DominantWeight, elements: Option<&[calogero::Weight]>) -> String {
        let size = self.rs.orbit_size(w);
        match self.format {
            OutputFormat::Text => {
                let mut out = format!("size {size}\n");
                for e in elements.unwrap_or_default() {
                    out.push_str(&format!("{e}\n"));
                }
                out
            }
            OutputFormat::Json => {
                let mut v = json!({ "weight": labels(w), "size": size.to_string() });
                if let Some(es) = elements {
                    v["elements"] = Value::Array(es.iter().map(|e| json!(e.labels())).collect());
                }
                pretty(v)
            }
            OutputFormat::Mathematica => {
                let mut out = format!("<|\"size\" -> {size}");
                if let Some(es) = elements {
                    let items = es.iter().map(|e| {
                        mathematica_list(e.labels().iter().map(i32::to_string))
                    });
                    out.push_str(&format!(", \"elements\" -> {}", mathematica_list(items)));
                }
                line(out + "|>")
            }
        }
    }

    pub fn character(&self, ch: &DominantCharacter) -> String {
        match self.format {
            OutputFormat::Text => line(ch.render_row(self.rs)),
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rs
                    .dominant_weights_below(ch.highest())
                    .into_iter()
                    .filter_map(|w| {
                        ch.multiplicities().get(&w).map(|m| {
                            json!({
                                "weight": labels(&w),
                                "multiplicity": big(m),
                                "orbit_size": self.rs.orbit_size(&w).to_string(),
                            })
                        })
                    })
                    .collect();
                pretty(json!({
                    "highest": labels(ch.highest()),
                    "dimension": big(&ch.dimension(self.rs)),
                    "multiplicities": rows,
                }))
            }
            OutputFormat::Mathematica => {
                line(self.combination("M", &self.dominance_order(ch.highest(), ch.multiplicities())))
            }
        }
    }

    pub fn z_polynomial<C: Coefficient>(&self, kind: &str, w: &DominantWeight, p: &ZPolynomial<C>) -> String {
        match self.format {
            OutputFormat::Text | OutputFormat::Mathematica => {
                line(self.engine.render_z(p, self.style()))
            }
            OutputFormat::Json => {
                let terms: Vec<Value> = p
                    .terms()
                    .rev()
                    .map(|(m, c)| json!({ "exponents": m.exponents(), "coefficient": c.render(Style::Explicit).signed() }))
                    .collect();
                pretty(json!({
                    "kind": kind,
                    "weight": labels(w),
                    "polynomial": self.engine.render_z(p, Style::Explicit),
                    "terms": terms,
                }))
            }
        }
    }

    pub fn operator(&self, op: &CSOperator, part: OperatorPart) -> String {
        let r = op.rank();
        let entries: Vec<(String, String)> = match part {
            OperatorPart::A => (1..=r)
                .flat_map(|j| (j..=r).map(move |k| (j, k)))
                .map(|(j, k)| (format!("a[{j},{k}]"), self.engine.render_z(op.a(j, k), self.style())))
                .collect(),
            OperatorPart::B0 => (1..=r).map(|j| (format!("b0[{j}]"), self.engine.render_z(op.b0(j), self.style()))).collect(),
            OperatorPart::B1 => (1..=r).map(|j| (format!("b1[{j}]"), self.engine.render_z(op.b1(j), self.style()))).collect(),
            OperatorPart::B => (1..=r)
                .map(|j| {
                    let (b0, b1) = (op.b0(j), op.b1(j));
                    let k = self.style().kappa();
                    let text = match (b0.is_zero(), b1.is_zero()) {
                        (_, true) => self.engine.render_z(b0, self.style()),
                        (true, false) => format!("{k}{}({})", self.style().times(), self.engine.render_z(b1, self.style())),
                        (false, false) => format!(
                            "{} + {k}{}({})",
                            self.engine.render_z(b0, self.style()),
                            self.style().times(),
                            self.engine.render_z(b1, self.style())
                        ),
                    };
                    (format!("b[{j}]"), text)
                })
                .collect(),
        };
        match self.format {
            OutputFormat::Text => entries.iter().map(|(n, v)| format!("{n} = {v}\n")).collect(),
            OutputFormat::Json => pretty(Value::Object(
                entries.into_iter().map(|(n, v)| (n, Value::String(v))).collect(),
            )),
            OutputFormat::Mathematica => {
                line(mathematica_list(entries.iter().map(|(n, v)| format!("{n} -> ({v})"))))
            }
        }
    }

    pub fn generalized_series(&self, s: &GeneralizedCGSeries) -> String {
        let terms: Vec<_> = s.terms.iter().map(|(w, c)| (w.clone(), c.render(self.style()))).collect();
        self.series(&s.a, &s.b, "P", &terms)
    }

    pub fn specialized_series(&self, s: &GeneralizedCGSeries, values: &BTreeMap<DominantWeight, num_rational::BigRational>) -> String {
        let terms: Vec<_> = s
            .terms
            .iter()
            .filter_map(|(w, _)| values.get(w).filter(|c| !c.is_zero_elem()).map(|c| (w.clone(), c.render(self.style()))))
            .collect();
        self.series(&s.a, &s.b, "P", &terms)
    }

    pub fn classical_series(&self, s: &DecompositionSeries) -> String {
        let top = DominantWeight::new(s.a.as_weight() + s.b.as_weight()).expect("sum of dominant weights is dominant");
        let terms = self.dominance_order(&top, &s.terms);
        self.series(&s.a, &s.b, "chi", &terms)
    }

    fn series(&self, a: &DominantWeight, b: &DominantWeight, head: &str, terms: &[(DominantWeight, Rendered)]) -> String {
        match self.format {
            OutputFormat::Json => pretty(json!({
                "a": labels(a),
                "b": labels(b),
                "basis": head,
                "terms": self.combination_json("coefficient", terms),
            })),
            _ => line(self.combination(head, terms)),
        }
    }

    pub fn reports(&self, reports: &[Report]) -> String {
        match self.format {
            OutputFormat::Text => {
                let mut out = String::new();
                for r in reports {
                    out.push_str(&format!("{r}\n"));
                    for f in &r.failures {
                        out.push_str(&format!("    {f}\n"));
                    }
                }
                out
            }
            OutputFormat::Json => pretty(Value::Array(
                reports
                    .iter()
                    .map(|r| {
                        json!({
                            "criterion": r.criterion.id,
                            "title": r.criterion.title,
                            "passed": r.passed(),
                            "checks": r.checks,
                            "failures": r.failures,
                            "seconds": r.elapsed.as_secs_f64(),
                            "budget_seconds": r.criterion.budget.as_secs(),
                        })
                    })
                    .collect(),
            )),
            OutputFormat::Mathematica => line(mathematica_list(reports.iter().map(|r| {
                format!(
                    "<|\"criterion\" -> {}, \"passed\" -> {}, \"checks\" -> {}|>",
                    r.criterion.id,
                    if r.passed() { "True" } else { "False" },
                    r.checks
                )
            }))),
        }
    }
}
