"""Input parsing for beacon specs and channel scenarios."""

from .spec_parser import SpecParser, SpecSyntaxError
from .scenario_parser import Scenario, ScenarioEvent, ScenarioParser

__all__ = ['SpecParser', 'SpecSyntaxError', 'Scenario', 'ScenarioEvent', 'ScenarioParser']
