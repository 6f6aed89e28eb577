#pragma once

// Abridged statechart grammar: four productions over an external parent.
inline constexpr const char* kStatechartExcerpt = R"(grammar Statechart extends Common {
  SCDefinition =
    "statechart" Name
    "{" Element* "}";

  interface Element;

  Transition implements Element =
    source:Name "->" target:Name
    ( ":" TransitionBody | ";" );

  State implements Element = "state" Name;
}
)";

inline constexpr const char* kExtendedExcerpt = R"(grammar ExtendedDeltaStatechart extends
  DeltaStatechart {
  DeltaTransitionScopeIdentifier implements
    ScopeIdentifier = "transition";
}
)";
