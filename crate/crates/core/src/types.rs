use std::fmt;

/// 0-based vertex index. External text formats are 1-based; conversion
/// happens at the I/O boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        VertexId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One directed edge `src -> dst` carrying an algorithm-specific value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeTriple<E> {
    pub src: VertexId,
    pub dst: VertexId,
    pub value: E,
}

impl<E> EdgeTriple<E> {
    pub fn new(src: u32, dst: u32, value: E) -> Self {
        EdgeTriple {
            src: VertexId(src),
            dst: VertexId(dst),
            value,
        }
    }

    pub fn reversed(self) -> Self {
        EdgeTriple {
            src: self.dst,
            dst: self.src,
            value: self.value,
        }
    }

    pub fn map_value<F>(self, f: impl FnOnce(E) -> F) -> EdgeTriple<F> {
        EdgeTriple {
            src: self.src,
            dst: self.dst,
            value: f(self.value),
        }
    }
}

/// Which edges a vertex scatters its message along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Messages travel `src -> dst`; the product runs over the transposed
    /// adjacency matrix.
    Out,
    /// Messages travel `dst -> src`; the product runs over the adjacency
    /// matrix itself.
    In,
    /// Both products, merged with the program's reduce before apply.
    Both,
}

/// Engine knobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Superstep cap for programs that run to convergence. Algorithms with
    /// their own iteration budget ignore it.
    pub max_iterations: usize,
    pub thread_count: usize,
    pub partitions_per_thread: usize,
    /// Fold every output row in a fixed order so floating-point results do
    /// not depend on the thread schedule or partition count.
    pub deterministic_reduction: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_iterations: usize::MAX,
            thread_count: 1,
            partitions_per_thread: 8,
            deterministic_reduction: true,
        }
    }
}

impl EngineConfig {
    pub fn with_threads(thread_count: usize) -> Self {
        EngineConfig {
            thread_count,
            ..Self::default()
        }
    }

    pub fn max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn partitions_per_thread(mut self, n: usize) -> Self {
        self.partitions_per_thread = n;
        self
    }

    pub fn total_partitions(&self) -> usize {
        self.thread_count * self.partitions_per_thread
    }
}
