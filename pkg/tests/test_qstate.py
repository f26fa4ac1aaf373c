import numpy as np
import pytest

from nptcert import jsonio
from nptcert.qstate import (
    AlphaOutOfRangeError,
    BadRankError,
    Bipartition,
    DensityMatrix,
    DimensionMismatchError,
    DimsSpec,
    MixtureSpec,
    WeightMismatchError,
    ZeroVectorError,
    assemble_bipartite,
    example1_mixture,
    haar_unitary,
    horodecki,
    make_pure,
    mix,
    product_pure,
    sample_haar_pure,
    sample_product,
    sample_pure_schmidt_n,
    sample_weights,
    schmidt_decompose,
    schmidt_number,
    to_density,
)

D22 = DimsSpec((2, 2))
D33 = DimsSpec((3, 3))
P22 = Bipartition(D22, (0,))
P33 = Bipartition(D33, (0,))


def bell():
    return make_pure([1, 0, 0, 1], D22)


class TestSpecs:
    def test_dims_validation(self):
        with pytest.raises(ValueError):
            DimsSpec((2,))
        with pytest.raises(ValueError):
            DimsSpec((2, 1))
        assert DimsSpec((2, 3, 4)).total_dim == 24

    def test_bipartition_validation(self):
        dims = DimsSpec((2, 2, 2))
        assert Bipartition(dims, (2, 0)).y == (0, 2)
        assert Bipartition(dims, (1,)).ybar == (0, 2)
        with pytest.raises(ValueError):
            Bipartition(dims, ())
        with pytest.raises(ValueError):
            Bipartition(dims, (0, 1, 2))
        with pytest.raises(ValueError):
            Bipartition(dims, (3,))

    def test_partition_dims(self):
        part = Bipartition(DimsSpec((2, 3, 4)), (0, 2))
        assert part.dim_y == 8 and part.dim_ybar == 3


class TestMakePure:
    def test_first_basis_ket(self):
        psi = make_pure([1, 0, 0, 0], D22)
        assert psi.amplitudes[0] == 1.0 and not psi.renormalized

    def test_bell(self):
        psi = make_pure([1, 0, 0, 1], D22)
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-15
        assert abs(psi.amplitudes[0] - 1 / np.sqrt(2)) < 1e-15

    def test_reference_chi0_exact_norm(self):
        amps = np.zeros(9)
        amps[0], amps[4], amps[8] = 0.5, 0.8, np.sqrt(0.11)
        psi = make_pure(amps, D33)
        assert np.linalg.norm(psi.amplitudes) == 1.0
        assert not psi.renormalized

    def test_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            make_pure(np.zeros(4), D22)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            make_pure(np.ones(3), D22)

    def test_renormalization_flag(self):
        psi = make_pure([2, 0, 0, 0], D22)
        assert psi.renormalized


class TestProductPure:
    def test_basis_product(self):
        psi = product_pure([1, 0], [1, 0], P22)
        assert psi.amplitudes[0] == 1.0

    def test_reference_chi1(self):
        psi = product_pure(
            [0.4, -0.6, np.sqrt(0.48)], [0.3, 0.95, np.sqrt(0.0075)], P33
        )
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-12
        assert schmidt_number(psi, P33) == 1

    def test_three_qubit_middle_cut(self):
        dims = DimsSpec((2, 2, 2))
        part = Bipartition(dims, (1,))
        rng = np.random.default_rng(0)
        factor_mid = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        bell02 = np.array([1, 0, 0, 1]) / np.sqrt(2)
        psi = product_pure(factor_mid, bell02, part)
        assert schmidt_number(psi, part) == 1
        assert schmidt_number(psi, Bipartition(dims, (0,))) == 2
        assert schmidt_number(psi, Bipartition(dims, (2,))) == 2

    def test_factor_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            product_pure([1, 0, 0], [1, 0], P22)


class TestSchmidt:
    def test_product_state(self):
        sd = schmidt_decompose(make_pure([1, 0, 0, 0], D22), P22)
        assert sd.schmidt_number == 1
        assert np.allclose(sd.coefficients, [1.0])

    def test_bell(self):
        sd = schmidt_decompose(bell(), P22)
        assert sd.schmidt_number == 2
        assert np.allclose(sd.coefficients, [1 / np.sqrt(2)] * 2)

    def test_reference_chi0_coefficients(self):
        spec = example1_mixture()
        sd = schmidt_decompose(spec.components[0], P33)
        assert np.allclose(sd.coefficients, [0.8, 0.5, np.sqrt(0.11)], atol=1e-13)
        assert sd.schmidt_number == 3

    def test_reassembly(self):
        rng = np.random.default_rng(21)
        for dims, y in [
            ((2, 2), (0,)),
            ((3, 4), (0,)),
            ((2, 3, 2), (0, 2)),
            ((2, 2, 3), (1,)),
        ]:
            spec = DimsSpec(dims)
            part = Bipartition(spec, y)
            psi = sample_haar_pure(spec, rng)
            sd = schmidt_decompose(psi, part)
            assert np.abs(sd.reassemble() - psi.amplitudes).max() < 1e-10
            assert abs(np.sum(sd.coefficients**2) - 1.0) < 1e-12

    def test_frames_orthonormal(self):
        rng = np.random.default_rng(22)
        psi = sample_haar_pure(D33, rng)
        sd = schmidt_decompose(psi, P33)
        g_left = sd.left_frame.conj().T @ sd.left_frame
        g_right = sd.right_frame.conj().T @ sd.right_frame
        assert np.abs(g_left - np.eye(sd.coefficients.size)).max() < 1e-12
        assert np.abs(g_right - np.eye(sd.coefficients.size)).max() < 1e-12

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            psi = sample_haar_pure(D33, rng)
            u, v = haar_unitary(3, rng), haar_unitary(3, rng)
            w = np.kron(u, v)
            rotated = make_pure(w @ psi.amplitudes, D33)
            s1 = schmidt_decompose(psi, P33).coefficients
            s2 = schmidt_decompose(rotated, P33).coefficients
            assert np.abs(s1 - s2).max() < 1e-10

    def test_schmidt_number_examples(self):
        psi_plus = make_pure(np.eye(3).ravel() / np.sqrt(3), D33)
        assert schmidt_number(psi_plus, P33) == 3
        rng = np.random.default_rng(24)
        d44 = DimsSpec((4, 4))
        psi = sample_haar_pure(d44, rng)
        assert schmidt_number(psi, Bipartition(d44, (0,))) == 4


class TestDensityAndMixture:
    def test_to_density_basis_ket(self):
        rho = to_density(make_pure([1, 0, 0, 0], D22))
        assert np.allclose(rho.matrix, np.diag([1, 0, 0, 0]))

    def test_to_density_bell(self):
        rho = to_density(bell()).matrix
        nz = np.abs(rho) > 1e-14
        assert nz.sum() == 4 and np.allclose(rho[nz], 0.5)

    def test_to_density_idempotent(self):
        rng = np.random.default_rng(25)
        rho = to_density(sample_haar_pure(D33, rng)).matrix
        assert np.abs(rho @ rho - rho).max() < 1e-12

    def test_mix_single_component(self):
        psi = bell()
        rho = mix(MixtureSpec((1.0,), (psi,)))
        assert np.abs(rho.matrix - to_density(psi).matrix).max() == 0.0

    def test_mix_two_kets(self):
        s1 = make_pure([1, 0, 0, 0], D22)
        s2 = make_pure([0, 0, 0, 1], D22)
        rho = mix(MixtureSpec((0.5, 0.5), (s1, s2)))
        assert np.allclose(rho.matrix, np.diag([0.5, 0, 0, 0.5]))

    def test_reference_mixture_is_state(self):
        rho = mix(example1_mixture())
        assert abs(np.trace(rho.matrix) - 1.0) < 1e-12
        assert rho.min_eigenvalue() > -1e-10

    def test_mix_properties(self):
        rng = np.random.default_rng(26)
        for _ in range(10):
            k = int(rng.integers(1, 4))
            comps = tuple(sample_haar_pure(D33, rng) for _ in range(k + 1))
            rho = mix(MixtureSpec(tuple(sample_weights(k + 1, rng)), comps))
            m = rho.matrix
            assert np.abs(m - m.conj().T).max() < 1e-14
            assert abs(np.trace(m) - 1.0) < 1e-12
            assert rho.min_eigenvalue() > -1e-10

    def test_weight_mismatch(self):
        with pytest.raises(WeightMismatchError):
            MixtureSpec((0.5, 0.5), (bell(),))

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            MixtureSpec((0.7, 0.4), (bell(), bell()))
        with pytest.raises(ValueError):
            MixtureSpec((-0.5, 1.5), (bell(), bell()))

    def test_density_component_only_first(self):
        rho0 = to_density(bell())
        MixtureSpec((0.5, 0.5), (rho0, bell()))
        with pytest.raises(ValueError):
            MixtureSpec((0.5, 0.5), (bell(), rho0))

    def test_density_validation(self):
        with pytest.raises(ValueError):
            DensityMatrix(D22, np.eye(4, dtype=complex))  # trace 4
        bad = np.diag([1.0, 0, 0, 0]).astype(complex)
        bad[0, 1] = 0.5
        with pytest.raises(ValueError):
            DensityMatrix(D22, bad)


class TestHorodeckiFamily:
    def test_trace_one_everywhere(self):
        for alpha in np.linspace(2.0, 5.0, 7):
            rho = horodecki(float(alpha))
            assert abs(np.trace(rho.matrix) - 1.0) < 1e-14

    def test_psd_inside_range(self):
        assert horodecki(2.5).min_eigenvalue() > -1e-12
        assert horodecki(5.0).min_eigenvalue() > -1e-12

    def test_alpha_out_of_range(self):
        with pytest.raises(AlphaOutOfRangeError):
            horodecki(1.9)
        with pytest.raises(AlphaOutOfRangeError):
            horodecki(5.1)

    def test_swap_symmetry(self):
        # Exchanging the two diagonal triples maps alpha to 5 - alpha.
        swap = {1: 3, 5: 7, 6: 2}
        for alpha in (2.0, 2.3, 2.75, 3.0):
            a = horodecki(alpha).matrix.copy()
            b = horodecki(5.0 - alpha).matrix
            for i, j in swap.items():
                a[[i, j], [i, j]] = a[[j, i], [j, i]]
            assert np.abs(a - b).max() < 1e-15

    def test_entries_linear_in_alpha(self):
        a2, a3, a4 = (horodecki(a).matrix for a in (2.0, 3.0, 4.0))
        assert np.abs(2 * a3 - a2 - a4).max() < 1e-15


class TestReferenceMixture:
    def test_weights(self):
        spec = example1_mixture()
        assert spec.weights == (0.01, 0.6, 0.09, 0.15, 0.15)
        assert abs(sum(spec.weights) - 1.0) < 1e-15

    def test_components_separable(self):
        spec = example1_mixture()
        for comp in spec.components[1:]:
            assert schmidt_number(comp, P33) == 1

    def test_flags(self):
        spec = example1_mixture()
        assert spec.separable_flags == (False, True, True, True, True)


class TestSamplers:
    def test_schmidt_target_is_hit(self):
        rng = np.random.default_rng(42)
        psi = sample_pure_schmidt_n(2, P22, rng)
        assert schmidt_number(psi, P22) == 2

    def test_rank_one_is_product(self):
        rng = np.random.default_rng(1)
        psi = sample_pure_schmidt_n(1, P33, rng)
        assert schmidt_number(psi, P33) == 1

    def test_rectangular(self):
        dims = DimsSpec((3, 4))
        part = Bipartition(dims, (0,))
        rng = np.random.default_rng(2)
        psi = sample_pure_schmidt_n(3, part, rng)
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-12
        assert schmidt_number(psi, part) == 3

    def test_bad_rank(self):
        rng = np.random.default_rng(3)
        with pytest.raises(BadRankError):
            sample_pure_schmidt_n(3, P22, rng)
        with pytest.raises(BadRankError):
            sample_pure_schmidt_n(0, P22, rng)

    def test_coefficient_floor(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            psi = sample_pure_schmidt_n(3, P33, rng)
            mu = schmidt_decompose(psi, P33).coefficients
            assert mu[-1] ** 2 > 0.009

    def test_product_sampler(self):
        rng = np.random.default_rng(5)
        psi = sample_product(P33, rng)
        assert schmidt_number(psi, P33) == 1

    def test_weights_sampler(self):
        rng = np.random.default_rng(6)
        w = sample_weights(3, rng)
        assert w.shape == (3,)
        assert abs(w.sum() - 1.0) < 1e-12
        assert np.all(w >= 1e-3)

    def test_determinism(self):
        a = sample_pure_schmidt_n(2, P22, np.random.default_rng(99))
        b = sample_pure_schmidt_n(2, P22, np.random.default_rng(99))
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_haar_unitary_is_unitary(self):
        rng = np.random.default_rng(7)
        u = haar_unitary(4, rng)
        assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-12


class TestIndexing:
    def test_assemble_matches_kron_for_leading_cut(self):
        rng = np.random.default_rng(30)
        left = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        right = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert np.allclose(assemble_bipartite(left, right, P33), np.kron(left, right))

    def test_assemble_interleaves_middle_cut(self):
        dims = DimsSpec((2, 3, 2))
        part = Bipartition(dims, (1,))
        left = np.arange(1, 4).astype(complex)          # on subsystem 1
        right = np.arange(1, 5).astype(complex)         # on subsystems 0, 2
        flat = assemble_bipartite(left, right, part)
        # Entry |i0 i1 i2> = right[2*i0 + i2] * left[i1]
        tensor = flat.reshape(2, 3, 2)
        for i0 in range(2):
            for i1 in range(3):
                for i2 in range(2):
                    assert tensor[i0, i1, i2] == right[2 * i0 + i2] * left[i1]


class TestJson:
    def test_state_roundtrip(self):
        psi = bell()
        again = jsonio.state_from_dict(jsonio.state_to_dict(psi))
        assert np.abs(again.amplitudes - psi.amplitudes).max() < 1e-15
        assert again.dims == psi.dims

    def test_density_roundtrip(self):
        rho = horodecki(3.3)
        again = jsonio.density_from_dict(jsonio.density_to_dict(rho))
        assert np.abs(again.matrix - rho.matrix).max() < 1e-15

    def test_mixture_roundtrip(self):
        spec = example1_mixture()
        again = jsonio.mixture_from_dict(jsonio.mixture_to_dict(spec))
        assert again.weights == spec.weights
        for a, b in zip(again.components, spec.components):
            assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-15

    def test_mixture_with_density_head(self):
        spec = MixtureSpec((0.5, 0.5), (to_density(bell()), bell()))
        again = jsonio.mixture_from_dict(jsonio.mixture_to_dict(spec))
        assert isinstance(again.components[0], DensityMatrix)

    def test_malformed_state(self):
        with pytest.raises(jsonio.FormatError):
            jsonio.state_from_dict({"dims": [2, 2]})
        with pytest.raises(jsonio.FormatError):
            jsonio.state_from_dict({"dims": [2, 2], "amplitudes": [[1.0]]})

    def test_malformed_mixture_field_reported(self):
        bad = {"weights": [1.0], "components": [{"dims": [2, 2], "amplitudes": "xx"}]}
        with pytest.raises(jsonio.FormatError) as err:
            jsonio.mixture_from_dict(bad)
        assert "components[0]" in str(err.value)
