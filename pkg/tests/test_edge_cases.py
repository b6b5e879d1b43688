"""Edge case and error handling tests."""

import json

import numpy as np
import pytest

from lapbound.core.config import get_settings, worker_count
from lapbound.core.exceptions import (
    CapacityExceededError,
    IdentityViolationError,
    ValidationError,
    VacuousError,
    format_error_message,
)
from lapbound.cli import EXIT_INPUT, EXIT_OK, main
from lapbound.core.logging import get_logger
from lapbound.models.complex import Graph, SimplicialComplex, make_simplex
from lapbound.models.matrix import BoundaryMatrix, IntegerMatrix, Spectrum, SymmetricMatrix
from lapbound.schemas.bounds import BoundKind, BoundReport, IndexBound
from lapbound.services.complex_service import close_downward, from_maximal_faces
from lapbound.services.io_service import (
    atomic_write_text,
    complex_to_file,
    dump_complex,
    load_complex,
    parse_complex,
    write_json,
)


class TestModels:
    """Invariants enforced at construction."""

    def test_make_simplex_sorts(self):
        assert make_simplex([3, 1, 2]) == (1, 2, 3)

    def test_make_simplex_rejects_repeats(self):
        with pytest.raises(ValidationError, match="repeats"):
            make_simplex([1, 1])

    def test_graph_rejects_loops(self):
        with pytest.raises(ValidationError, match="loop"):
            Graph(vertices=(1, 2), edges=frozenset({(1, 1)}))

    def test_graph_normalizes_edges(self):
        G = Graph(vertices=(2, 1), edges=frozenset({(2, 1)}))
        assert G.vertices == (1, 2)
        assert G.edges == frozenset({(1, 2)})

    def test_complex_must_be_downward_closed(self):
        with pytest.raises(ValidationError, match="not downward closed"):
            SimplicialComplex(
                vertices=(1, 2, 3),
                faces_by_dim=(((),), ((1,), (2,), (3,)), ((1, 2),), ((1, 2, 3),)),
            )

    def test_vertex_layer_must_match(self):
        with pytest.raises(ValidationError, match="singletons"):
            SimplicialComplex(vertices=(1, 2), faces_by_dim=(((),), ((1,),)))

    def test_symmetric_matrix_is_exact(self):
        with pytest.raises(ValidationError, match="not exactly symmetric"):
            SymmetricMatrix(np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]]))

    def test_matrix_entries_are_read_only(self):
        M = SymmetricMatrix(np.eye(2))
        with pytest.raises(ValueError):
            M.entries[0, 0] = 5.0

    def test_integer_matrix_rejects_fractions(self):
        with pytest.raises(ValidationError, match="non-integral"):
            IntegerMatrix(np.array([[0.5]]))

    def test_boundary_column_weight(self):
        """A 1-boundary column needs exactly two nonzeros."""
        with pytest.raises(ValidationError):
            BoundaryMatrix(
                k=1,
                matrix=IntegerMatrix(np.array([[1], [0]])),
                row_faces=((1,), (2,)),
                col_faces=((1, 2),),
            )

    def test_spectrum_must_be_ascending(self):
        with pytest.raises(ValidationError):
            Spectrum(eigenvalues=np.array([2.0, 1.0]), residual_tol=0.0)


class TestSchemas:
    """Pydantic report models."""

    def test_bound_report_violations_respect_tolerance(self):
        report = BoundReport(
            kind=BoundKind.MAIN,
            k=1,
            n=3,
            tolerance=1e-8,
            per_index=[
                IndexBound(i=1, lower_bound=0.0, actual=-1e-10, slack=-1e-10),
                IndexBound(i=2, lower_bound=1.0, actual=0.5, slack=-0.5),
            ],
        )
        assert [row.i for row in report.violations] == [2]
        assert not report.holds
        assert report.min_slack == -0.5

    def test_empty_report(self):
        report = BoundReport(kind=BoundKind.SUBCOMPLEX, k=0, n=0, vacuous=True)
        assert report.holds
        assert report.min_slack is None


class TestComplexFiles:
    """The JSON complex format."""

    def test_parse_and_dump(self, triangle_boundary):
        text = dump_complex(triangle_boundary)
        assert json.loads(text) == {"vertices": [1, 2, 3], "maximal_faces": [[1, 2], [1, 3], [2, 3]]}
        assert parse_complex(text) == triangle_boundary

    def test_file_form_keeps_isolated_vertices(self):
        X = parse_complex('{"vertices": [0, 5], "maximal_faces": []}')
        assert complex_to_file(X).maximal_faces == [[0], [5]]

    def test_maximal_faces_may_be_omitted(self):
        assert parse_complex('{"vertices": [1, 2]}').f_vector == (1, 2, 0)

    def test_negative_vertex(self):
        with pytest.raises(ValidationError, match="vertex labels must be >= 0"):
            parse_complex('{"vertices": [-1], "maximal_faces": []}')

    def test_repeated_face_vertex(self):
        with pytest.raises(ValidationError, match="repeats a vertex"):
            parse_complex('{"vertices": [1, 2], "maximal_faces": [[1, 1]]}')

    def test_empty_generating_face(self):
        """The empty face is always present; listing it adds nothing."""
        assert from_maximal_faces([1, 2], [[]]) == from_maximal_faces([1, 2], [])
        assert from_maximal_faces([1, 2], [[], [1, 2]]).f_vector == (1, 2, 1, 0)
        assert close_downward([], [[]]).f_vector == (1, 0)

    def test_empty_generating_face_from_cli(self, write_complex, capsys):
        path = write_complex("empty_face.json", [1, 2], [[]])
        code = main(["--log-level", "WARNING", "spectrum", "--input", str(path), "--dim", "0"])
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert "betti: [1]" in stdout
        assert "f-vector: [1, 2, 0]" in stdout

    @pytest.mark.parametrize(
        "text",
        [
            '{"vertices": [true, 2], "maximal_faces": []}',
            '{"vertices": ["2", 3], "maximal_faces": []}',
            '{"vertices": [1, 3.0], "maximal_faces": []}',
            '{"vertices": [1, 2], "maximal_faces": [[true, 2]]}',
            '{"vertices": [1, 2], "maximal_faces": [["1", 2]]}',
            '{"vertices": [1, 2], "maximal_faces": [[1.0, 2]]}',
        ],
    )
    def test_labels_must_be_json_integers(self, text):
        """Booleans, strings and floats are not coerced into labels."""
        with pytest.raises(ValidationError, match="cannot parse complex file"):
            parse_complex(text)

    def test_coercible_labels_rejected_from_cli(self, tmp_path):
        path = tmp_path / "coerced.json"
        path.write_text(
            '{"vertices": [true, "2", 3.0], "maximal_faces": [[true, "2"]]}', encoding="utf-8"
        )
        code = main(["--log-level", "WARNING", "spectrum", "--input", str(path), "--dim", "0"])
        assert code == EXIT_INPUT

    def test_load_complex(self, write_complex, full_triangle):
        path = write_complex("full.json", [1, 2, 3], [[1, 2, 3]])
        assert load_complex(path) == full_triangle

    def test_atomic_write_replaces(self, tmp_path):
        target = tmp_path / "nested" / "out.txt"
        atomic_write_text(target, "first")
        atomic_write_text(target, "second")
        assert target.read_text(encoding="utf-8") == "second"
        assert [p.name for p in target.parent.iterdir()] == ["out.txt"]

    def test_write_json_mapping(self, tmp_path):
        path = write_json(tmp_path / "x.json", {"b": 1, "a": [1, 2]})
        assert json.loads(path.read_text(encoding="utf-8")) == {"a": [1, 2], "b": 1}


class TestSettingsAndErrors:
    """Configuration overrides, worker counts and error formatting."""

    def test_defaults(self):
        settings = get_settings()
        assert settings.SLACK_TOL == 1e-8
        assert settings.SUM_CUSHION == 1e-9
        assert settings.RANK_PRIMES == (2147483647, 2147483629)

    def test_environment_override(self, override_settings):
        settings = override_settings(EIGEN_TOL="1e-6", MAX_DENSE_ORDER=50)
        assert settings.EIGEN_TOL == 1e-6
        assert settings.MAX_DENSE_ORDER == 50

    def test_worker_count(self, override_settings, mocker):
        override_settings(THREADS=3)
        assert worker_count() == 3
        override_settings(THREADS=0)
        mocker.patch("lapbound.core.config.os.cpu_count", return_value=None)
        assert worker_count() == 1

    def test_format_error_message(self):
        message = format_error_message(VacuousError(2), "spectrum")
        assert message == "spectrum failed [VACUOUS]: vacuous: no faces of dimension 2"

    def test_error_details(self):
        error = CapacityExceededError("additive compound order", 10, 5)
        assert error.details == {"what": "additive compound order", "size": 10, "cap": 5}
        assert IdentityViolationError("L_k = Q - P").error_code == "IDENTITY_VIOLATION"

    def test_validation_error_field(self):
        assert ValidationError("bad", field="k").details == {"field": "k"}

    def test_logger_accepts_key_values(self, caplog):
        logger = get_logger("lapbound.tests")
        with caplog.at_level("WARNING", logger="lapbound.tests"):
            logger.warning("threshold ties within numeric cushion", k=1, near_ties=2)
        assert "near_ties=2" in caplog.text
