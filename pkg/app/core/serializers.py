"""
Serializers for command configuration and machine-readable output.
"""
import csv

from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from core.exceptions import DomainError
from core.models import SUPPORTED_DIMENSIONS, Discretization, SweepConfig

FORMATS = ['csv', 'json']


def format_number(value):
    """Lossless text form of a number; None becomes an empty field."""
    if value is None:
        return ''
    if isinstance(value, float):
        return format(value, '.17g')
    return str(value)


def render_json(data):
    """UTF-8 JSON text of serialized data."""
    return JSONRenderer().render(data).decode('utf-8')


def write_csv(stream, columns, rows):
    """Write rows of serialized data with a fixed header."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row[column]) for column in columns])


class SweepConfigSerializer(serializers.Serializer):
    """Serializer for sweep grids and output settings."""
    L_values = serializers.ListField(
        child=serializers.FloatField(min_value=0.0), allow_empty=False)
    t_values = serializers.ListField(
        child=serializers.FloatField(min_value=0.0), allow_empty=False)
    kappa_values = serializers.ListField(
        child=serializers.FloatField(min_value=0.0), allow_empty=False)
    d = serializers.ChoiceField(choices=SUPPORTED_DIMENSIONS, default=1)
    tol = serializers.FloatField(default=1e-10)
    n = serializers.IntegerField(min_value=64, default=1024)
    output = serializers.CharField(required=False, allow_null=True,
                                   default=None)
    fmt = serializers.ChoiceField(choices=FORMATS, default='csv')
    jobs = serializers.IntegerField(min_value=1, default=1)

    def validate_tol(self, value):
        """Tolerances must be positive."""
        if not value > 0:
            raise serializers.ValidationError('tol must be > 0.')
        return value

    def validate_n(self, value):
        """Grids are powers of two or refinements of one."""
        try:
            Discretization(value)
        except DomainError as exc:
            raise serializers.ValidationError(str(exc))
        return value

    def validate(self, attrs):
        """Every grid value must be strictly positive."""
        for name in ('L_values', 't_values', 'kappa_values'):
            if any(not value > 0 for value in attrs[name]):
                raise serializers.ValidationError(
                    {name: 'All values must be > 0.'})
        return attrs

    def create(self, validated_data):
        """Create and return a SweepConfig."""
        for name in ('L_values', 't_values', 'kappa_values'):
            validated_data[name] = tuple(validated_data[name])
        return SweepConfig(**validated_data)


class TraceReportSerializer(serializers.Serializer):
    """Serializer for a trace with its error budget."""
    value = serializers.FloatField()
    error = serializers.FloatField()
    truncation_error = serializers.FloatField()
    discretization_error = serializers.FloatField()
    eigencount_used = serializers.IntegerField()


class SpectrumSerializer(serializers.Serializer):
    """Serializer for computed eigenvalues."""
    values = serializers.ListField(child=serializers.FloatField())
    errors = serializers.ListField(child=serializers.FloatField())
    converged = serializers.BooleanField()


class DifferenceSerializer(serializers.Serializer):
    """Serializer for the trace difference and its two parts."""
    delta = serializers.FloatField()
    y = serializers.FloatField(source='y_term')
    z = serializers.FloatField(source='z_term')
    err_delta = serializers.FloatField()
    err_y = serializers.FloatField()
    err_z = serializers.FloatField()
    noise_floor = serializers.FloatField()


class TheoremCheckSerializer(serializers.Serializer):
    """Serializer for one comparison with the bound."""
    holds = serializers.BooleanField()
    delta = serializers.FloatField()
    rhs = serializers.FloatField()
    margin = serializers.FloatField()
    constant = serializers.FloatField()


class SweepRowSerializer(serializers.Serializer):
    """Serializer for one row of a sweep."""
    L = serializers.FloatField()
    kappa = serializers.FloatField()
    t = serializers.FloatField()
    d = serializers.IntegerField()
    delta = serializers.FloatField()
    y = serializers.FloatField()
    z = serializers.FloatField()
    err = serializers.FloatField()
    rhs = serializers.FloatField()
    margin = serializers.FloatField(allow_null=True)


class DecayFitSerializer(serializers.Serializer):
    """Serializer for a decay fit summary."""
    abscissa = serializers.CharField()
    fitted_rate = serializers.FloatField()
    theorem_rate = serializers.FloatField()
    expected_rate = serializers.FloatField()
    intercept = serializers.FloatField()
    residual_rms = serializers.FloatField()
    mean_ordinate = serializers.FloatField()
    points_used = serializers.IntegerField()
    beats_theorem = serializers.BooleanField()


class NumberSeriesSerializer(serializers.Serializer):
    """Serializer for the particle-number series."""
    value = serializers.FloatField()
    error = serializers.FloatField()
    terms_used = serializers.IntegerField()
    tail_bound = serializers.FloatField()


class FiniteSizeSerializer(serializers.Serializer):
    """Serializer for the finite-size scan."""
    partition_rate = serializers.FloatField()
    number_rate = serializers.FloatField()
    partition_rms_gaussian = serializers.FloatField()
    partition_rms_exponential = serializers.FloatField()
    number_rms_gaussian = serializers.FloatField()
    number_rms_exponential = serializers.FloatField()
    points_used = serializers.IntegerField()
    gaussian_preferred = serializers.BooleanField()


class EstimateOutcomeSerializer(serializers.Serializer):
    """Serializer for one identity or estimate check."""
    name = serializers.CharField()
    holds = serializers.BooleanField()
    constant = serializers.FloatField(allow_null=True)
    worst_ratio = serializers.FloatField()
    worst_point = serializers.SerializerMethodField()

    def get_worst_point(self, obj):
        return dict(obj.worst_point)
