import numpy as np

from drudefd import FieldBundle, GridFunction, MeshSpec, Stagger
from drudefd.model import field_layout

def rng(seed=0):
    return np.random.default_rng(seed)

def gen_field(mesh, stagger, gen=None):
    gen = rng() if gen is None else gen
    return GridFunction(mesh, stagger, gen.standard_normal(mesh.shape))

def gen_smooth_field(mesh, stagger, gen=None, modes=3):
    """Random trigonometric polynomial with a few low modes per axis."""
    gen = rng() if gen is None else gen
    coords = np.meshgrid(*Stagger(*stagger).coordinates(mesh), indexing='ij')
    values = np.zeros(mesh.shape)
    for _ in range(modes):
        k = gen.integers(1, 4, size=mesh.d)
        phase = gen.uniform(0, 2 * np.pi)
        arg = sum(2 * np.pi * kk * x / mesh.L for kk, x in zip(k, coords))
        values += gen.standard_normal() * np.sin(arg + phase)
    return GridFunction(mesh, stagger, values)

def gen_bundle(mesh, dim=1, pair='EK', gen=None):
    gen = rng() if gen is None else gen
    return FieldBundle(
        (name, gen_field(mesh, stagger, gen))
        for name, stagger in field_layout(dim, pair)
    )

def gen_mesh(d=1, gen=None, L=1.0):
    gen = rng() if gen is None else gen
    return MeshSpec(L, int(gen.integers(8, 33)), d)

def constant_bundle(mesh, values, dim=1, pair='EK'):
    return FieldBundle(
        (name, GridFunction(mesh, stagger, np.full(mesh.shape, value)))
        for (name, stagger), value in zip(field_layout(dim, pair), values)
    )

def assert_adjoint(lhs, rhs, scale, tol=1e-13):
    assert abs(lhs - rhs) <= tol * scale, (lhs, rhs, scale)
