from django import forms
from django.utils.translation import gettext_lazy as _

from .engine import TrialKind
from .grid import MIN_POINTS
from .potential import POTENTIAL_NAMES
from .records import FORMATS
from .runs import METHODS, RunConfig
from .stencil import WallPolicy


def _choices(values):
    return [(value, value) for value in values]


class RunConfigForm(forms.Form):
    """Validates merged run options (flags over config file over defaults)."""

    potential = forms.ChoiceField(choices=_choices(POTENTIAL_NAMES), label=_("Potential"))
    sign = forms.TypedChoiceField(choices=[("1", "+1"), ("-1", "-1")], coerce=int, label=_("Sign"))
    R = forms.FloatField(required=False, label=_("Half-width R"))
    L = forms.FloatField(required=False, label=_("Box width L"))
    d = forms.FloatField(label=_("Offset d"))
    N = forms.IntegerField(min_value=MIN_POINTS, label=_("Grid points"))
    dtau = forms.FloatField(label=_("Time step"))
    tol = forms.FloatField(label=_("Energy tolerance"))
    psi_tol = forms.FloatField(required=False, label=_("Wavefunction tolerance"))
    max_iter = forms.IntegerField(min_value=1, label=_("Maximum iterations"))
    sustain = forms.IntegerField(min_value=1, label=_("Sustained iterations"))
    n_states = forms.IntegerField(min_value=1, label=_("Number of states"))
    trial = forms.ChoiceField(choices=_choices(TrialKind), label=_("Trial function"))
    wall = forms.ChoiceField(choices=_choices(WallPolicy), label=_("Wall ghost policy"))
    method = forms.ChoiceField(choices=_choices(METHODS), label=_("Method"))
    format = forms.ChoiceField(choices=_choices(FORMATS), label=_("Output format"))
    out = forms.CharField(required=False, empty_value=None, label=_("Output path"))
    dump_psi = forms.CharField(required=False, empty_value=None, label=_("Wavefunction dump path"))
    jobs = forms.IntegerField(min_value=1, label=_("Parallel jobs"))

    def __init__(self, data=None, *args, **kwargs):
        # sign may arrive as an int from the config layer
        if data is not None and data.get("sign") is not None:
            data = {**data, "sign": str(int(data["sign"]))}
        super().__init__(data, *args, **kwargs)

    def _positive(self, name):
        value = self.cleaned_data.get(name)
        if value is not None and not value > 0:
            raise forms.ValidationError(_("Must be positive."), code="positive")
        return value

    def clean_R(self):
        return self._positive("R")

    def clean_L(self):
        return self._positive("L")

    def clean_dtau(self):
        return self._positive("dtau")

    def clean_tol(self):
        return self._positive("tol")

    def clean_psi_tol(self):
        return self._positive("psi_tol")

    def clean(self):
        cleaned = super().clean()
        R, L = cleaned.get("R"), cleaned.get("L")
        if R is not None and L is not None:
            raise forms.ValidationError(_("Give either R or L, not both."), code="geometry")
        if R is None and L is None and not self.has_error("R") and not self.has_error("L"):
            raise forms.ValidationError(_("Give the box as R or L."), code="geometry")

        d = cleaned.get("d")
        if R is not None and d and cleaned.get("potential") != "shifted-harmonic":
            self.add_error("d", _("An offset with R needs the shifted-harmonic potential; use L to shift the walls."))

        N, n_states = cleaned.get("N"), cleaned.get("n_states")
        if N is not None and n_states is not None and n_states > N - 2:
            self.add_error("n_states", _("At most N - 2 states fit on the grid."))
        return cleaned

    def to_config(self) -> RunConfig:
        return RunConfig(**{name: self.cleaned_data[name] for name in self.fields})

    def error_text(self) -> str:
        messages = []
        for name, errors in self.errors.items():
            prefix = "" if name == "__all__" else f"{name}: "
            messages.extend(prefix + str(error) for error in errors)
        return "; ".join(messages)
