# prescheck package init
