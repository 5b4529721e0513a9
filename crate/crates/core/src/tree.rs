//! Ordered rooted trees whose non-root nodes carry labels.
//!
//! A tree is stored as the preorder sequence of its non-root nodes, each
//! with its label and number of children, plus the number of children of the
//! (unlabeled) root. This encoding makes the surgery used by the product and
//! coproduct a matter of slice concatenation, and gives a cheap total order.

use std::cmp::Ordering;
use std::fmt;

use crate::derivation::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node<L> {
    pub label: L,
    pub arity: usize,
}

/// An ordered rooted tree with an unlabeled root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree<L> {
    root_arity: usize,
    nodes: Vec<Node<L>>,
}

/// Trees labeled by nonzero polynomial derivations.
pub type LabeledTree = Tree<Label>;

/// Child indices from the root; the empty path is the root itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut p = self.0.clone();
        p.push(i);
        NodePath(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for NodePath {
    fn from(v: Vec<usize>) -> Self {
        NodePath(v)
    }
}

impl<const K: usize> From<[usize; K]> for NodePath {
    fn from(v: [usize; K]) -> Self {
        NodePath(v.to_vec())
    }
}

/// Length of the preorder run of the subtree starting at `start`.
fn subtree_len<L>(nodes: &[Node<L>], start: usize) -> usize {
    let mut pending = 1usize;
    let mut i = start;
    while pending > 0 {
        pending = pending + nodes[i].arity - 1;
        i += 1;
    }
    i - start
}

/// `(start, len)` of each top-level subtree in a preorder forest.
fn forest_spans<L>(nodes: &[Node<L>]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0;
    while start < nodes.len() {
        let len = subtree_len(nodes, start);
        spans.push((start, len));
        start += len;
    }
    spans
}

impl<L: Clone> Tree<L> {
    /// The single-node tree, the multiplicative unit.
    pub fn unit() -> Self {
        Tree {
            root_arity: 0,
            nodes: Vec::new(),
        }
    }

    /// Root with a single child labeled `label`.
    pub fn v(label: L) -> Self {
        Tree {
            root_arity: 1,
            nodes: vec![Node { label, arity: 0 }],
        }
    }

    /// Root with one child labeled `label`, whose children are the root
    /// children of `subtrees` in sequence.
    pub fn u(label: L, subtrees: &[Tree<L>]) -> Self {
        let joined = Tree::t(subtrees);
        let mut nodes = Vec::with_capacity(joined.nodes.len() + 1);
        nodes.push(Node {
            label,
            arity: joined.root_arity,
        });
        nodes.extend(joined.nodes);
        Tree {
            root_arity: 1,
            nodes,
        }
    }

    /// Identify the roots of `subtrees`, keeping their children in sequence.
    pub fn t(subtrees: &[Tree<L>]) -> Self {
        Tree {
            root_arity: subtrees.iter().map(|t| t.root_arity).sum(),
            nodes: subtrees.iter().flat_map(|t| t.nodes.iter().cloned()).collect(),
        }
    }

    /// Rebuild from a root arity and preorder node list, checking consistency.
    pub fn from_preorder(root_arity: usize, nodes: Vec<Node<L>>) -> Option<Self> {
        let spans = forest_spans_checked(&nodes)?;
        (spans == root_arity).then_some(Tree { root_arity, nodes })
    }

    pub fn root_arity(&self) -> usize {
        self.root_arity
    }

    pub fn nodes(&self) -> &[Node<L>] {
        &self.nodes
    }

    /// Number of non-root nodes.
    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() + 1
    }

    pub fn is_unit(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.nodes.iter().map(|n| &n.label)
    }

    /// The root children as single-child trees, in order.
    pub fn branches(&self) -> Vec<Tree<L>> {
        forest_spans(&self.nodes)
            .into_iter()
            .map(|(s, l)| Tree {
                root_arity: 1,
                nodes: self.nodes[s..s + l].to_vec(),
            })
            .collect()
    }

    /// Tree built from the root children selected by `keep`.
    pub fn select_branches(&self, keep: impl Fn(usize) -> bool) -> Tree<L> {
        let mut root_arity = 0;
        let mut nodes = Vec::new();
        for (k, (s, l)) in forest_spans(&self.nodes).into_iter().enumerate() {
            if keep(k) {
                root_arity += 1;
                nodes.extend_from_slice(&self.nodes[s..s + l]);
            }
        }
        Tree { root_arity, nodes }
    }

    /// Preorder index of the node at `path`.
    fn resolve(&self, path: &NodePath) -> Result<Option<usize>> {
        let mut children_start = 0usize;
        let mut arity = self.root_arity;
        let mut current = None;
        for &k in &path.0 {
            if k >= arity {
                return Err(Error::InvalidPath(path.0.clone()));
            }
            let mut pos = children_start;
            for _ in 0..k {
                pos += subtree_len(&self.nodes, pos);
            }
            current = Some(pos);
            arity = self.nodes[pos].arity;
            children_start = pos + 1;
        }
        Ok(current)
    }

    fn resolve_non_root(&self, path: &NodePath) -> Result<usize> {
        self.resolve(path)?.ok_or(Error::RootPath)
    }

    pub fn contains_path(&self, path: &NodePath) -> bool {
        self.resolve(path).is_ok()
    }

    pub fn label_at(&self, path: &NodePath) -> Result<&L> {
        Ok(&self.nodes[self.resolve_non_root(path)?].label)
    }

    /// Paths of all non-root nodes in preorder.
    pub fn paths(&self) -> Vec<NodePath> {
        fn walk<L>(nodes: &[Node<L>], pos: &mut usize, prefix: &NodePath, out: &mut Vec<NodePath>, arity: usize) {
            for k in 0..arity {
                let here = prefix.child(k);
                let a = nodes[*pos].arity;
                out.push(here.clone());
                *pos += 1;
                walk(nodes, pos, &here, out, a);
            }
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut pos = 0;
        walk(&self.nodes, &mut pos, &NodePath::root(), &mut out, self.root_arity);
        out
    }

    /// The subtree below the node at `path`, re-rooted: the node's label is
    /// dropped and its children become the root children.
    pub fn subtree_at(&self, path: &NodePath) -> Result<Tree<L>> {
        let i = self.resolve_non_root(path)?;
        let len = subtree_len(&self.nodes, i);
        Ok(Tree {
            root_arity: self.nodes[i].arity,
            nodes: self.nodes[i + 1..i + len].to_vec(),
        })
    }

    /// Relabel the node at `path` and replace everything below it by the
    /// root children of `replacement`.
    pub fn graft(&self, path: &NodePath, new_label: L, replacement: &Tree<L>) -> Result<Tree<L>> {
        let i = self.resolve_non_root(path)?;
        let len = subtree_len(&self.nodes, i);
        let mut nodes = Vec::with_capacity(self.nodes.len() - len + 1 + replacement.nodes.len());
        nodes.extend_from_slice(&self.nodes[..i]);
        nodes.push(Node {
            label: new_label,
            arity: replacement.root_arity,
        });
        nodes.extend_from_slice(&replacement.nodes);
        nodes.extend_from_slice(&self.nodes[i + len..]);
        Ok(Tree {
            root_arity: self.root_arity,
            nodes,
        })
    }

    pub fn map_labels<M: Clone>(&self, mut f: impl FnMut(&L) -> M) -> Tree<M> {
        Tree {
            root_arity: self.root_arity,
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    label: f(&n.label),
                    arity: n.arity,
                })
                .collect(),
        }
    }

    /// Grossman–Larson attachment: for each map `d` from the root children
    /// of `self` to the nodes of `target` (preorder index, 0 = root), the
    /// tree obtained by linking each child to its image. Attached subtrees
    /// precede the original children of the node they are linked to and keep
    /// their relative order.
    pub fn attachments(&self, target: &Tree<L>) -> Vec<Tree<L>> {
        let forest = forest_spans(&self.nodes);
        let m = forest.len();
        let n = target.node_count();
        let total = n.checked_pow(m as u32).expect("attachment count overflow");
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; m];
        let mut attached: Vec<Vec<usize>> = vec![Vec::new(); n];
        for _ in 0..total {
            for a in attached.iter_mut() {
                a.clear();
            }
            for (k, &dk) in digits.iter().enumerate() {
                attached[dk].push(k);
            }
            let mut nodes = Vec::with_capacity(self.nodes.len() + target.nodes.len());
            let emit = |nodes: &mut Vec<Node<L>>, list: &[usize]| {
                for &k in list {
                    let (s, l) = forest[k];
                    nodes.extend_from_slice(&self.nodes[s..s + l]);
                }
            };
            emit(&mut nodes, &attached[0]);
            for (j, node) in target.nodes.iter().enumerate() {
                nodes.push(Node {
                    label: node.label.clone(),
                    arity: node.arity + attached[j + 1].len(),
                });
                emit(&mut nodes, &attached[j + 1]);
            }
            out.push(Tree {
                root_arity: target.root_arity + attached[0].len(),
                nodes,
            });
            // odometer
            for d in digits.iter_mut() {
                *d += 1;
                if *d < n {
                    break;
                }
                *d = 0;
            }
        }
        out
    }
}

fn forest_spans_checked<L>(nodes: &[Node<L>]) -> Option<usize> {
    let mut count = 0;
    let mut pending = 0usize;
    for n in nodes {
        if pending == 0 {
            count += 1;
            pending = 1;
        }
        pending = pending - 1 + n.arity;
    }
    (pending == 0).then_some(count)
}

impl<L: Ord> Ord for Tree<L> {
    /// Degree first, then the preorder node sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.nodes
            .len()
            .cmp(&other.nodes.len())
            .then_with(|| self.nodes.cmp(&other.nodes))
            .then_with(|| self.root_arity.cmp(&other.root_arity))
    }
}

impl<L: Ord> PartialOrd for Tree<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: fmt::Display> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn children<L: fmt::Display>(
            f: &mut fmt::Formatter<'_>,
            nodes: &[Node<L>],
            pos: &mut usize,
            arity: usize,
        ) -> fmt::Result {
            if arity == 0 {
                return write!(f, "[]");
            }
            write!(f, "[ ")?;
            for k in 0..arity {
                if k > 0 {
                    write!(f, ", ")?;
                }
                let node = &nodes[*pos];
                *pos += 1;
                write!(f, "{}", node.label)?;
                children(f, nodes, pos, node.arity)?;
            }
            write!(f, " ]")
        }
        write!(f, "*")?;
        if self.root_arity > 0 {
            let mut pos = 0;
            children(f, &self.nodes, &mut pos, self.root_arity)?;
        }
        Ok(())
    }
}

/// Stable text key identifying a tree; equal keys iff equal trees.
pub fn canonical_key<L: fmt::Display>(tree: &Tree<L>) -> String {
    tree.to_string()
}

/// Every ordered tree shape with exactly `nodes` nodes (root included),
/// as root arity plus preorder arity list.
pub fn shapes(nodes: usize) -> Vec<(usize, Vec<usize>)> {
    // forests with `n` nodes, as preorder arity sequences
    fn forests(n: usize, memo: &mut Vec<Option<Vec<(usize, Vec<usize>)>>>) -> Vec<(usize, Vec<usize>)> {
        if let Some(v) = &memo[n] {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push((0, Vec::new()));
        } else {
            // first tree has k nodes: a root plus a forest of k-1 nodes
            for k in 1..=n {
                for (a, inner) in forests(k - 1, memo) {
                    for (count, rest) in forests(n - k, memo) {
                        let mut seq = vec![a];
                        seq.extend(&inner);
                        seq.extend(&rest);
                        out.push((count + 1, seq));
                    }
                }
            }
        }
        memo[n] = Some(out.clone());
        out
    }
    if nodes == 0 {
        return Vec::new();
    }
    let mut memo = vec![None; nodes];
    forests(nodes - 1, &mut memo)
}

/// All trees with at most `max_nodes` nodes whose labels come from `alphabet`.
pub fn enumerate_trees<L: Clone>(max_nodes: usize, alphabet: &[L]) -> Vec<Tree<L>> {
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        for (root_arity, arities) in shapes(n) {
            let m = arities.len();
            let total = alphabet.len().pow(m as u32);
            for code in 0..total {
                let mut c = code;
                let nodes = arities
                    .iter()
                    .map(|&arity| {
                        let label = alphabet[c % alphabet.len()].clone();
                        c /= alphabet.len();
                        Node { label, arity }
                    })
                    .collect();
                out.push(Tree { root_arity, nodes });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = Tree<char>;

    fn v(c: char) -> T {
        Tree::v(c)
    }

    #[test]
    fn unit_has_degree_zero() {
        let u = T::unit();
        assert_eq!(u.node_count(), 1);
        assert_eq!(u.degree(), 0);
        assert!(u.is_unit());
    }

    #[test]
    fn constructors() {
        assert_eq!(v('a').degree(), 1);
        let chain = Tree::u('e', &[v('f')]);
        assert_eq!(chain.root_arity(), 1);
        assert_eq!(chain.nodes()[0].arity, 1);
        assert_eq!(Tree::u('e', &[T::unit()]), v('e'));
        let tt = Tree::t(&[v('a'), v('b')]);
        assert_eq!(tt.root_arity(), 2);
        assert_eq!(Tree::t(&[chain.clone()]), chain);
        assert_eq!(Tree::t(&[]), T::unit());
    }

    #[test]
    fn u_of_t_is_u_of_list() {
        let t1 = Tree::u('a', &[v('b')]);
        let t2 = v('c');
        assert_eq!(
            Tree::u('e', &[Tree::t(&[t1.clone(), t2.clone()])]),
            Tree::u('e', &[t1, t2])
        );
    }

    #[test]
    fn subtree_examples() {
        assert_eq!(v('e').subtree_at(&[0].into()).unwrap(), T::unit());
        assert_eq!(Tree::u('e', &[v('f')]).subtree_at(&[0].into()).unwrap(), v('f'));
        let tt = Tree::t(&[v('e'), v('f')]);
        assert_eq!(tt.subtree_at(&[1].into()).unwrap(), T::unit());
        assert_eq!(tt.subtree_at(&NodePath::root()), Err(Error::RootPath));
        assert!(matches!(tt.subtree_at(&[2].into()), Err(Error::InvalidPath(_))));
        assert!(matches!(tt.subtree_at(&[0, 0].into()), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn graft_examples() {
        assert_eq!(v('r').graft(&[0].into(), 'e', &T::unit()).unwrap(), v('e'));
        assert_eq!(
            Tree::u('e', &[v('f')]).graft(&[0].into(), 'g', &T::unit()).unwrap(),
            v('g')
        );
        let t = Tree::t(&[Tree::u('a', &[v('b'), v('c')]), v('d')]);
        for p in t.paths() {
            let sub = t.subtree_at(&p).unwrap();
            let lab = *t.label_at(&p).unwrap();
            assert_eq!(t.graft(&p, lab, &sub).unwrap(), t);
        }
    }

    #[test]
    fn display_grammar() {
        let tt = Tree::t(&[v('a'), Tree::u('b', &[v('c')])]);
        assert_eq!(tt.to_string(), "*[ a[], b[ c[] ] ]");
        assert_eq!(T::unit().to_string(), "*");
    }

    #[test]
    fn keys_distinguish_order() {
        let ab = Tree::t(&[v('a'), v('b')]);
        let ba = Tree::t(&[v('b'), v('a')]);
        assert_ne!(canonical_key(&ab), canonical_key(&ba));
        assert_ne!(canonical_key(&v('a')), canonical_key(&v('b')));
        assert_eq!(canonical_key(&T::unit()), canonical_key(&T::unit()));
    }

    #[test]
    fn attachment_count() {
        // two root children onto a 3-node tree: 3^2 maps
        let t1 = Tree::t(&[v('a'), v('b')]);
        let t2 = Tree::u('c', &[v('d')]);
        assert_eq!(t1.attachments(&t2).len(), 9);
    }

    #[test]
    fn pair_attachments() {
        let got = v('e').attachments(&v('f'));
        assert_eq!(got, vec![Tree::t(&[v('e'), v('f')]), Tree::u('f', &[v('e')])]);
    }

    #[test]
    fn shape_counts_are_catalan() {
        let counts: Vec<usize> = (1..=6).map(|n| shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
        for n in 1..=5 {
            for (ra, ar) in shapes(n) {
                let nodes = ar.into_iter().map(|arity| Node { label: 'x', arity }).collect();
                assert!(Tree::from_preorder(ra, nodes).is_some());
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_trees(4, &['a', 'b']).len(), 1 + 2 + 8 + 40);
    }

    #[test]
    fn paths_in_preorder() {
        let t = Tree::t(&[Tree::u('a', &[v('b')]), v('c')]);
        let labels: Vec<char> = t.paths().iter().map(|p| *t.label_at(p).unwrap()).collect();
        assert_eq!(labels, vec!['a', 'b', 'c']);
    }
}
