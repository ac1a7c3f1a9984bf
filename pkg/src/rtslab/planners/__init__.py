"""Real-time planners (IDABCD, IDRTMinimax, Portfolio) and the rush scripts they use."""

from .base import Decision, MoveGenConfig, SearchBudget, joint_actions, unit_choices
from .clock import MonotonicClock, VirtualClock
from .portfolio import Assignment, PortfolioConfig, portfolio_decide
from .scripts import Script, ScriptName, default_scripts, get_script, script_action
from .search import idabcd_decide, idrtminimax_decide, minimax_value

PLANNER_NAMES = ("idabcd", "idrtminimax", "portfolio")

__all__ = [
    "Assignment", "Decision", "MonotonicClock", "MoveGenConfig", "PLANNER_NAMES",
    "PortfolioConfig", "Script", "ScriptName", "SearchBudget", "VirtualClock",
    "default_scripts", "get_script", "idabcd_decide", "idrtminimax_decide",
    "joint_actions", "minimax_value", "portfolio_decide", "script_action", "unit_choices",
]
