"""
Complex arrays that record the operations applied to them.

Gradients use the packed real-pair convention: for a real loss L and a
complex value w, the stored gradient is dL/dRe(w) + j dL/dIm(w), which is
twice the conjugate Wirtinger derivative.  For a holomorphic y = f(x) the
gradient propagates as G_x = conj(f'(x)) G_y.
"""
import enum
import numpy as np

from fdsic.errors import GraphError, ShapeError

AXES = ("signals", "time", "channels")


class Role(enum.Enum):
    """Whether a parameter is kept or re-fitted at test time."""

    SHARED = "shared"
    ADAPTIVE = "adaptive"


class CxArray:
    """Complex float64 array with optional axis labels and graph links.

    Attributes:
        data: complex128 ndarray
        axes: tuple of labels from AXES, one per axis, or None
        grad: packed gradient, set on parameters by backward()
        parents: operand CxArrays of the recording operation
        backward_fn: maps the output gradient to one gradient per parent
    """

    # Keep numpy from broadcasting over CxArray operands.
    __array_ufunc__ = None

    def __init__(self, data, axes=None, parents=(), backward_fn=None):
        """Wrap data, checking the axis labels against its shape."""
        self.data = np.asarray(data, dtype=np.complex128)
        if axes is not None:
            axes = tuple(axes)
            if len(axes) != self.data.ndim:
                raise ShapeError(
                    f"{len(axes)} axis labels for {self.data.ndim} axes"
                )
            if len(set(axes)) != len(axes) or not set(axes) <= set(AXES):
                raise ShapeError(f"invalid axis labels {axes}")
        self.axes = axes
        self.grad = None
        self.parents = tuple(parents)
        self.backward_fn = backward_fn

    @property
    def shape(self):
        """Shape of the data."""
        return self.data.shape

    @property
    def ndim(self):
        """Number of axes."""
        return self.data.ndim

    def axis(self, label):
        """Return the position of a labeled axis."""
        if self.axes is None or label not in self.axes:
            raise ShapeError(f"no {label!r} axis in {self.axes}")
        return self.axes.index(label)

    def __float__(self):
        """Return the real part of a single-element array."""
        if self.data.size != 1:
            raise ShapeError(f"cannot convert shape {self.shape} to float")
        return float(self.data.real.ravel()[0])

    def __repr__(self):
        """Show shape and labels."""
        return f"{type(self).__name__}(shape={self.shape}, axes={self.axes})"

    def __sub__(self, other):
        """Record self - other; other may be a constant array."""
        return subtract(self, other)

    def __rsub__(self, other):
        """Record other - self for a constant other."""
        return subtract(other, self)

    def swapaxes(self, first, second):
        """Record an axis swap that carries the labels along."""
        axes = None
        if self.axes is not None:
            axes = list(self.axes)
            axes[first], axes[second] = axes[second], axes[first]

        def backward_fn(grad):
            return (np.swapaxes(grad, first, second),)

        return CxArray(np.swapaxes(self.data, first, second), axes,
                       (self,), backward_fn)


class Parameter(CxArray):
    """Trainable complex weights."""

    def __init__(self, name, data, role=Role.SHARED):
        """Create a named parameter with its role."""
        super().__init__(np.array(data, dtype=np.complex128))
        self.name = name
        self.role = Role(role)
        self.grad = np.zeros_like(self.data)

    def __repr__(self):
        """Show name, shape and role."""
        return (f"Parameter({self.name!r}, shape={self.shape}, "
                f"role={self.role.name})")

    @property
    def size(self):
        """Number of complex weights."""
        return self.data.size


def as_node(value, axes=None):
    """Wrap a constant array, passing existing CxArrays through."""
    if isinstance(value, CxArray):
        return value
    return CxArray(value, axes)


def subtract(left, right):
    """Record left - right; either operand may be a constant array."""
    left, right = as_node(left), as_node(right)
    if left.shape != right.shape:
        raise ShapeError(f"cannot subtract {right.shape} from {left.shape}")

    def backward_fn(grad):
        return grad, -grad

    return CxArray(left.data - right.data, left.axes or right.axes,
                   (left, right), backward_fn)


def _is_constant(node):
    return not node.parents and not isinstance(node, Parameter)


def _topological_order(root):
    """Return the nodes reachable from root, inputs before outputs."""
    order, seen = [], set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        stack.extend((parent, False) for parent in node.parents
                     if id(parent) not in seen)
    return order


def _propagate(node, grad, grads):
    """Add the gradients of node's parents into grads, keyed by id."""
    for parent, parent_grad in zip(node.parents, node.backward_fn(grad)):
        if parent_grad is None or _is_constant(parent):
            continue
        if id(parent) in grads:
            grads[id(parent)] = grads[id(parent)] + parent_grad
        else:
            grads[id(parent)] = parent_grad


def backward(loss, params=()):
    """Back-propagate a scalar real loss through its recorded graph.

    Args:
        loss: 0-d CxArray produced by a loss function
        params: Parameters that must receive a gradient even when the loss
            does not depend on them

    Returns:
        dict mapping parameter name to its packed gradient; the same arrays
        are stored on each parameter's grad attribute

    Raises:
        GraphError: loss is not a scalar produced by recorded operations
    """
    if not isinstance(loss, CxArray):
        raise GraphError(f"expected a CxArray loss, got {type(loss)}")
    if loss.data.size != 1:
        raise GraphError(f"loss must be a scalar, got shape {loss.shape}")
    if _is_constant(loss):
        raise GraphError("loss was not produced by a recorded forward pass")

    grads = {id(loss): np.ones_like(loss.data)}
    reached = []
    for node in reversed(_topological_order(loss)):
        grad = grads.pop(id(node), None)
        if grad is None:
            continue
        if isinstance(node, Parameter):
            node.grad = grad
            reached.append(node)
            continue
        if node.backward_fn is not None:
            _propagate(node, grad, grads)

    result = {}
    for param in params:
        if not any(param is node for node in reached):
            param.grad = np.zeros_like(param.data)
        result[param.name] = param.grad
    for node in reached:
        result[node.name] = node.grad
    return result
