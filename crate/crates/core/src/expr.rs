//! Subtraction-free expression DAGs.
//!
//! Every coordinate formula in the crate (mutations, ensemble maps, crystal
//! actions, weights) is built once as a [`PositiveMap`] and then evaluated
//! either classically over [`PositiveRationals`](crate::semifield::PositiveRationals)
//! or tropically over [`TropicalIntegers`](crate::semifield::TropicalIntegers).

use std::collections::HashMap;
use std::fmt;

use crate::semifield::{EvalError, Semifield};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Variable(u32),
    /// A positive integer constant, always `>= 1`.
    Constant(u64),
    Sum(Vec<NodeId>),
    Product(Vec<NodeId>),
    Quotient(NodeId, NodeId),
    Power(NodeId, i64),
}

/// Hash-consing arena for building expressions.
///
/// Nodes only refer to earlier nodes, so the arena is always in
/// topological order.
#[derive(Debug, Default)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
    memo: HashMap<Node, NodeId>,
}

impl ExprBuilder {
    pub fn new() -> ExprBuilder {
        ExprBuilder::default()
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.memo.get(&node) {
            return id;
        }
        let id = NodeId(u32::try_from(self.nodes.len()).expect("expression too large"));
        self.nodes.push(node.clone());
        self.memo.insert(node, id);
        id
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn var(&mut self, index: usize) -> NodeId {
        self.intern(Node::Variable(index as u32))
    }

    pub fn constant(&mut self, n: u64) -> NodeId {
        assert!(n >= 1, "positive expressions only admit constants >= 1");
        self.intern(Node::Constant(n))
    }

    pub fn one(&mut self) -> NodeId {
        self.constant(1)
    }

    fn is_one(&self, id: NodeId) -> bool {
        self.nodes[id.index()] == Node::Constant(1)
    }

    /// Sum of at least one term.
    pub fn sum(&mut self, mut terms: Vec<NodeId>) -> NodeId {
        assert!(!terms.is_empty(), "empty sums are not positive expressions");
        if terms.len() == 1 {
            return terms[0];
        }
        terms.sort();
        self.intern(Node::Sum(terms))
    }

    /// Product; the empty product is the constant `1`.
    pub fn product(&mut self, factors: Vec<NodeId>) -> NodeId {
        let mut factors: Vec<NodeId> = factors.into_iter().filter(|&f| !self.is_one(f)).collect();
        match factors.len() {
            0 => self.one(),
            1 => factors[0],
            _ => {
                factors.sort();
                self.intern(Node::Product(factors))
            }
        }
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.product(vec![a, b])
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.sum(vec![a, b])
    }

    pub fn quotient(&mut self, num: NodeId, den: NodeId) -> NodeId {
        if self.is_one(den) {
            return num;
        }
        if num == den {
            return self.one();
        }
        self.intern(Node::Quotient(num, den))
    }

    pub fn pow(&mut self, base: NodeId, e: i64) -> NodeId {
        if e == 0 || self.is_one(base) {
            return self.one();
        }
        if e == 1 {
            return base;
        }
        if let Node::Power(inner, f) = self.nodes[base.index()] {
            return self.pow(inner, f * e);
        }
        self.intern(Node::Power(base, e))
    }

    /// `Π base^e`, skipping zero exponents.
    pub fn monomial(&mut self, factors: &[(NodeId, i64)]) -> NodeId {
        let parts: Vec<NodeId> = factors
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|&(b, e)| self.pow(b, e))
            .collect();
        self.product(parts)
    }

    /// Copies `map` into this arena with its variables replaced by `inputs`.
    pub fn inline(&mut self, map: &PositiveMap, inputs: &[NodeId]) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = Vec::with_capacity(map.nodes.len());
        for node in &map.nodes {
            let id = match node {
                Node::Variable(v) => inputs[*v as usize],
                Node::Constant(n) => self.constant(*n),
                Node::Sum(ts) => self.sum(ts.iter().map(|t| ids[t.index()]).collect()),
                Node::Product(fs) => self.product(fs.iter().map(|f| ids[f.index()]).collect()),
                Node::Quotient(a, b) => self.quotient(ids[a.index()], ids[b.index()]),
                Node::Power(a, e) => self.pow(ids[a.index()], *e),
            };
            ids.push(id);
        }
        map.outputs.iter().map(|o| ids[o.index()]).collect()
    }

    /// Freezes the arena into a map with the given outputs, dropping
    /// unreachable nodes.
    pub fn finish(self, arity: usize, outputs: Vec<NodeId>) -> PositiveMap {
        let mut live = vec![false; self.nodes.len()];
        for o in &outputs {
            live[o.index()] = true;
        }
        for i in (0..self.nodes.len()).rev() {
            if !live[i] {
                continue;
            }
            match &self.nodes[i] {
                Node::Sum(cs) | Node::Product(cs) => cs.iter().for_each(|c| live[c.index()] = true),
                Node::Quotient(a, b) => {
                    live[a.index()] = true;
                    live[b.index()] = true;
                }
                Node::Power(a, _) => live[a.index()] = true,
                Node::Variable(_) | Node::Constant(_) => {}
            }
        }
        let mut remap = vec![NodeId(u32::MAX); self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.into_iter().enumerate() {
            if !live[i] {
                continue;
            }
            let r = |id: &NodeId| remap[id.index()];
            let node = match node {
                Node::Sum(cs) => Node::Sum(cs.iter().map(r).collect()),
                Node::Product(cs) => Node::Product(cs.iter().map(r).collect()),
                Node::Quotient(a, b) => Node::Quotient(r(&a), r(&b)),
                Node::Power(a, e) => Node::Power(r(&a), e),
                other => other,
            };
            remap[i] = NodeId(nodes.len() as u32);
            nodes.push(node);
        }
        let outputs = outputs.iter().map(|o| remap[o.index()]).collect();
        PositiveMap { arity, nodes, outputs }
    }
}

/// A tuple of positive expressions in `arity` variables sharing one DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveMap {
    arity: usize,
    nodes: Vec<Node>,
    outputs: Vec<NodeId>,
}

/// Node counts per kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ShapeSummary {
    pub variables: usize,
    pub constants: usize,
    pub sums: usize,
    pub products: usize,
    pub quotients: usize,
    pub powers: usize,
    pub min_constant: Option<u64>,
}

impl PositiveMap {
    /// The map whose outputs are its inputs.
    pub fn identity(arity: usize) -> PositiveMap {
        let mut b = ExprBuilder::new();
        let outs = (0..arity).map(|i| b.var(i)).collect();
        b.finish(arity, outs)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn output_len(&self) -> usize {
        self.outputs.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Evaluates every output. `inputs[v]` is the value of `Variable(v)`.
    pub fn eval<S: Semifield>(&self, sf: &S, inputs: &[S::Elem]) -> Result<Vec<S::Elem>, EvalError> {
        let mut vals: Vec<S::Elem> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Variable(i) => inputs
                    .get(*i as usize)
                    .cloned()
                    .ok_or(EvalError::MissingBinding(*i as usize))?,
                Node::Constant(n) => sf.constant(*n),
                Node::Sum(ts) => {
                    let mut acc = vals[ts[0].index()].clone();
                    for t in &ts[1..] {
                        acc = sf.add(&acc, &vals[t.index()])?;
                    }
                    acc
                }
                Node::Product(fs) => {
                    let mut acc = vals[fs[0].index()].clone();
                    for f in &fs[1..] {
                        acc = sf.mul(&acc, &vals[f.index()])?;
                    }
                    acc
                }
                Node::Quotient(a, b) => sf.div(&vals[a.index()], &vals[b.index()])?,
                Node::Power(a, e) => sf.pow(&vals[a.index()], *e)?,
            };
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|o| vals[o.index()].clone()).collect())
    }

    /// Evaluates a single-output map.
    pub fn eval_one<S: Semifield>(&self, sf: &S, inputs: &[S::Elem]) -> Result<S::Elem, EvalError> {
        assert_eq!(self.outputs.len(), 1, "eval_one on a map with several outputs");
        Ok(self.eval(sf, inputs)?.pop().expect("one output"))
    }

    /// `self ∘ inner`: feeds the outputs of `inner` into `self`.
    pub fn compose(&self, inner: &PositiveMap) -> PositiveMap {
        assert_eq!(self.arity, inner.outputs.len(), "arity mismatch in composition");
        let mut b = ExprBuilder::new();
        let vars: Vec<NodeId> = (0..inner.arity).map(|i| b.var(i)).collect();
        let mid = b.inline(inner, &vars);
        let out = b.inline(self, &mid);
        b.finish(inner.arity, out)
    }

    /// Restricts to the listed outputs.
    pub fn select(&self, outputs: &[usize]) -> PositiveMap {
        let mut b = ExprBuilder::new();
        let vars: Vec<NodeId> = (0..self.arity).map(|i| b.var(i)).collect();
        let all = b.inline(self, &vars);
        b.finish(self.arity, outputs.iter().map(|&i| all[i]).collect())
    }

    pub fn shape(&self) -> ShapeSummary {
        let mut s = ShapeSummary::default();
        for node in &self.nodes {
            match node {
                Node::Variable(_) => s.variables += 1,
                Node::Constant(n) => {
                    s.constants += 1;
                    s.min_constant = Some(s.min_constant.map_or(*n, |m| m.min(*n)));
                }
                Node::Sum(_) => s.sums += 1,
                Node::Product(_) => s.products += 1,
                Node::Quotient(..) => s.quotients += 1,
                Node::Power(..) => s.powers += 1,
            }
        }
        s
    }

    /// Structural positivity: every constant is a positive integer and no
    /// node refers forward. Holds by construction; exposed for auditing.
    pub fn is_structurally_positive(&self) -> bool {
        self.nodes.iter().enumerate().all(|(i, node)| {
            let before = |id: &NodeId| id.index() < i;
            match node {
                Node::Variable(v) => (*v as usize) < self.arity,
                Node::Constant(n) => *n >= 1,
                Node::Sum(cs) | Node::Product(cs) => !cs.is_empty() && cs.iter().all(before),
                Node::Quotient(a, b) => before(a) && before(b),
                Node::Power(a, _) => before(a),
            }
        })
    }

    fn render(&self, id: NodeId, names: &dyn Fn(usize) -> String, out: &mut String) {
        use std::fmt::Write;
        match &self.nodes[id.index()] {
            Node::Variable(v) => out.push_str(&names(*v as usize)),
            Node::Constant(n) => {
                let _ = write!(out, "{n}");
            }
            Node::Sum(ts) => {
                out.push('(');
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    self.render(*t, names, out);
                }
                out.push(')');
            }
            Node::Product(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push('*');
                    }
                    self.render(*f, names, out);
                }
            }
            Node::Quotient(a, b) => {
                out.push('(');
                self.render(*a, names, out);
                out.push_str(")/(");
                self.render(*b, names, out);
                out.push(')');
            }
            Node::Power(a, e) => {
                self.render(*a, names, out);
                let _ = write!(out, "^({e})");
            }
        }
    }

    /// Infix rendering of output `k`, with variables named by `names`.
    pub fn render_output(&self, k: usize, names: &dyn Fn(usize) -> String) -> String {
        let mut s = String::new();
        self.render(self.outputs[k], names, &mut s);
        s
    }
}

impl fmt::Display for PositiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: usize| format!("x{v}");
        for k in 0..self.outputs.len() {
            writeln!(f, "{}", self.render_output(k, &names))?;
        }
        Ok(())
    }
}
