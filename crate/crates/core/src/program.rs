use std::fmt;

use crate::types::{Direction, VertexId};

/// Failure raised inside a user callback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallbackError(pub String);

impl CallbackError {
    pub fn new(msg: impl Into<String>) -> Self {
        CallbackError(msg.into())
    }
}

impl fmt::Display for CallbackError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CallbackError {}

/// Which vertices emit messages at the start of a superstep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activity {
    /// Only vertices whose property changed in the previous superstep
    /// (plus whatever the caller marked active before the first one).
    Changed,
    /// Every vertex, every superstep. Iterative numeric programs whose
    /// update reads all in-neighbors need this; termination still happens
    /// once no property changes.
    All,
}

/// A vertex program.
///
/// One superstep calls `send_message` on each active vertex, pushes the
/// messages across edges in the program's direction where
/// `process_message` turns each into a value, folds the values arriving at
/// a vertex with `reduce` starting from `reduce_identity`, and finally
/// hands the folded value to `apply`.
///
/// `reduce` must be commutative and associative, and
/// `reduce(identity, m) == m`.
pub trait GraphProgram: Sync {
    type Property: Clone + PartialEq + Send + Sync;
    type Message: Default + Send + Sync;
    type Value: Default + Send + Sync;
    type Edge: Send + Sync;

    fn direction(&self) -> Direction {
        Direction::Out
    }

    fn activity(&self) -> Activity {
        Activity::Changed
    }

    /// Whether vertices that receive nothing still run `apply` with the
    /// reduce identity. Off by default: untouched vertices keep their state.
    fn apply_without_message(&self) -> bool {
        false
    }

    /// `None` means the vertex stays silent this superstep.
    fn send_message(&self, vertex: VertexId, property: &Self::Property) -> Option<Self::Message>;

    /// `dst` is the receiving vertex's property as of the start of the
    /// superstep.
    fn process_message(
        &self,
        message: &Self::Message,
        edge: &Self::Edge,
        dst: &Self::Property,
    ) -> Result<Self::Value, CallbackError>;

    fn reduce_identity(&self) -> Self::Value;

    fn reduce(&self, acc: &mut Self::Value, value: Self::Value);

    fn apply(&self, reduced: &Self::Value, property: &mut Self::Property);
}

/// Per-vertex state plus the active flags driving message generation.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexPropertyStore<P> {
    properties: Vec<P>,
    active: Vec<bool>,
}

impl<P> VertexPropertyStore<P> {
    /// Store with every vertex inactive.
    pub fn new(properties: Vec<P>) -> Self {
        let active = vec![false; properties.len()];
        VertexPropertyStore { properties, active }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> P) -> Self {
        Self::new((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.properties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.properties.is_empty()
    }

    pub fn properties(&self) -> &[P] {
        &self.properties
    }

    pub fn property(&self, v: VertexId) -> &P {
        &self.properties[v.index()]
    }

    pub fn property_mut(&mut self, v: VertexId) -> &mut P {
        &mut self.properties[v.index()]
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        self.active[v.index()]
    }

    pub fn active_flags(&self) -> &[bool] {
        &self.active
    }

    pub fn set_active(&mut self, v: VertexId, on: bool) {
        self.active[v.index()] = on;
    }

    pub fn activate_all(&mut self) {
        self.active.fill(true);
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [P], &mut [bool]) {
        (&mut self.properties, &mut self.active)
    }

    pub fn into_properties(self) -> Vec<P> {
        self.properties
    }
}
