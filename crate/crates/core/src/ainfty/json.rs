//! JSON form: basis, degrees, sparse tensors keyed by generator-name tuples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AInftyAlgebra;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::novikov::NovikovElement;
use crate::rational::{format_rational, parse_rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorJson {
    pub inputs: Vec<String>,
    pub output: BTreeMap<String, NovikovElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvatureJson {
    pub object: String,
    pub value: BTreeMap<String, NovikovElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    #[serde(default = "default_grading")]
    pub grading: u32,
    pub cutoff: String,
    #[serde(default = "default_arity")]
    pub max_arity: usize,
    /// omitted for a single-object algebra
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorJson>,
    /// object → unit generator
    #[serde(default)]
    pub units: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curvature: Vec<CurvatureJson>,
    pub tensors: Vec<TensorJson>,
}

fn default_grading() -> u32 {
    2
}

fn default_arity() -> usize {
    super::DEFAULT_MAX_ARITY
}

const DEFAULT_OBJECT: &str = "L";

impl AInftyAlgebra {
    pub fn to_json(&self) -> AlgebraJson {
        let single = self.objects.len() == 1 && self.objects[0] == DEFAULT_OBJECT;
        let obj = |o: usize| if single { None } else { Some(self.objects[o].clone()) };
        let named = |v: &SparseVec| -> BTreeMap<String, NovikovElement> { v.iter().map(|(g, x)| (self.generators[*g].name.clone(), x.clone())).collect() };
        AlgebraJson {
            grading: self.grading,
            cutoff: format_rational(&self.cutoff),
            max_arity: self.max_arity,
            objects: if single { Vec::new() } else { self.objects.clone() },
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorJson { name: g.name.clone(), degree: g.degree, source: obj(g.source), target: obj(g.target) })
                .collect(),
            units: self.units.iter().enumerate().filter_map(|(o, u)| u.map(|g| (self.objects[o].clone(), self.generators[g].name.clone()))).collect(),
            curvature: self
                .curvature
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_empty())
                .map(|(o, c)| CurvatureJson { object: self.objects[o].clone(), value: named(c) })
                .collect(),
            tensors: self.tensors.iter().map(|(k, v)| TensorJson { inputs: self.names(k), output: named(v) }).collect(),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let mut a = AInftyAlgebra::new(j.grading, parse_rational(&j.cutoff)?)?.with_max_arity(j.max_arity);
        let objects = if j.objects.is_empty() { vec![DEFAULT_OBJECT.to_string()] } else { j.objects.clone() };
        for o in &objects {
            a.add_object(o)?;
        }
        let object = |name: &Option<String>| -> Result<usize> {
            match name {
                None if objects.len() == 1 => Ok(0),
                None => Err(Error::MalformedAlgebra("generator without source/target in a category".into())),
                Some(n) => objects.iter().position(|o| o == n).ok_or_else(|| Error::MalformedAlgebra(format!("unknown object {n}"))),
            }
        };
        for g in &j.generators {
            a.add_generator(&g.name, g.degree, object(&g.source)?, object(&g.target)?)?;
        }
        let gen = |a: &AInftyAlgebra, n: &str| a.index_of(n).ok_or_else(|| Error::MalformedAlgebra(format!("unknown generator {n}")));
        let vec = |a: &AInftyAlgebra, m: &BTreeMap<String, NovikovElement>| -> Result<SparseVec> { m.iter().map(|(n, x)| Ok((gen(a, n)?, x.clone()))).collect() };
        for (o, u) in &j.units {
            let oi = object(&Some(o.clone()))?;
            let ui = gen(&a, u)?;
            a.set_unit(oi, ui)?;
        }
        for c in &j.curvature {
            let oi = object(&Some(c.object.clone()))?;
            let v = vec(&a, &c.value)?;
            a.set_curvature(oi, v)?;
        }
        for t in &j.tensors {
            let inputs = t.inputs.iter().map(|n| gen(&a, n)).collect::<Result<Vec<_>>>()?;
            if a.tensors.contains_key(&inputs) {
                return Err(Error::MalformedAlgebra(format!("m on {} given twice", t.inputs.join(","))));
            }
            let v = vec(&a, &t.output)?;
            a.set_tensor(inputs, v)?;
        }
        Ok(a)
    }
}
